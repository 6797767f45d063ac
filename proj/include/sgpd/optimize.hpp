#pragma once

// Full-batch heavy-ball subgradient descent on the sparsification loss
// v ↦ dhat(full domain, domain(v)). Coordinates live in the nonnegativity
// reparametrization; the returned domain is the best iterate seen, not the
// last one, since subgradient steps on a piecewise-linear objective need not
// descend monotonically.

#include <chrono>
#include <cstdint>
#include <vector>

#include "sampling.hpp"
#include "subgrad.hpp"

namespace sgpd {

struct OptimConfig {
    std::size_t m = 0;  // number of movable intervals; 0 defers to the explicit init
    int epochs = 750;
    double lr = 1e-3;
    double momentum = 0.9;
    double lr_decay = 0.99;
    std::uint64_t seed = 0;
};

struct LossTrace {
    std::vector<double> loss;     // one entry per epoch plus the initial point
    std::vector<double> seconds;  // wall time since the start of the run
};

struct OptimResult {
    Domain sparse;      // decoded best iterate
    DomainVector best;  // reparametrized coordinates of the best iterate
    double best_loss = 0.0;
    int best_epoch = 0;
    LossTrace trace;
};

// Uniform random m-subset of the domain without replacement (partial
// Fisher-Yates), encoded in draw order. Deterministic for a fixed seed.
[[nodiscard]] inline DomainVector init_domain(const Domain& full, std::size_t m, std::uint64_t seed) {
    if (m == 0) throw invalid_input("initial domain needs at least one interval");
    if (m > full.size())
        throw invalid_input("m exceeds the domain size; reduce m or pass an explicit initial domain");
    const DomainVector fv = to_domain_vector(full);
    Rng rng(seed);
    const std::vector<std::size_t> picks = sample_distinct(rng, m, full.size());
    DomainVector dv;
    dv.coords.reserve(6 * m);
    for (const std::size_t i : picks)
        dv.coords.insert(dv.coords.end(), fv.coords.begin() + static_cast<std::ptrdiff_t>(6 * i),
                         fv.coords.begin() + static_cast<std::ptrdiff_t>(6 * i + 6));
    return dv;
}

inline void validate_config(const OptimConfig& cfg) {
    if (cfg.epochs < 0) throw invalid_input("epoch count must be nonnegative");
    if (!(cfg.lr > 0.0) || !std::isfinite(cfg.lr)) throw invalid_input("learning rate must be positive");
    if (!(cfg.momentum >= 0.0 && cfg.momentum < 1.0)) throw invalid_input("momentum must lie in [0, 1)");
    if (!(cfg.lr_decay > 0.0 && cfg.lr_decay <= 1.0)) throw invalid_input("learning-rate decay must lie in (0, 1]");
}

[[nodiscard]] inline OptimResult optimize(const Domain& full, const OptimConfig& cfg, const DomainVector& init) {
    validate_config(cfg);
    validate_domain_vector(init);
    const std::size_t m = init.interval_count();
    if (cfg.m != 0 && cfg.m != m) throw invalid_input("config m does not match the initial domain size");

    const PLGraph graph = build_loss_graph(full, m);
    PLWorkspace ws;
    std::vector<double> raw = init.coords;
    std::vector<double> velocity(raw.size(), 0.0);
    std::vector<double> v(raw.size(), 0.0);
    std::vector<double> grad_v(raw.size(), 0.0);
    std::vector<double> grad_raw(raw.size(), 0.0);

    OptimResult out;
    const auto started = std::chrono::steady_clock::now();
    const auto record = [&](double loss) {
        out.trace.loss.push_back(loss);
        out.trace.seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count());
    };

    reparam_nonneg(raw, v);
    double loss = pl_forward(graph, v, ws);
    pl_backward(graph, ws, grad_v);
    record(loss);
    out.best.coords = v;
    out.best_loss = loss;
    out.best_epoch = 0;

    double lr = cfg.lr;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        reparam_nonneg_backward(raw, grad_v, grad_raw);
        for (std::size_t i = 0; i < raw.size(); ++i) {
            velocity[i] = cfg.momentum * velocity[i] - lr * grad_raw[i];
            raw[i] += velocity[i];
        }
        lr *= cfg.lr_decay;
        reparam_nonneg(raw, v);
        loss = pl_forward(graph, v, ws);
        pl_backward(graph, ws, grad_v);
        record(loss);
        if (loss < out.best_loss) {
            out.best.coords = v;
            out.best_loss = loss;
            out.best_epoch = epoch;
        }
    }

    out.sparse = domain_from_vector(full.name.empty() ? "sparse" : full.name + "-sparse", out.best);
    return out;
}

[[nodiscard]] inline OptimResult optimize(const Domain& full, const OptimConfig& cfg) {
    if (cfg.m == 0) throw invalid_input("config must set m when no initial domain is given");
    return optimize(full, cfg, init_domain(full, cfg.m, cfg.seed));
}

} // namespace sgpd
