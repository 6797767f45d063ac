#pragma once

// Piecewise-linear computation graphs and subgradients for the sparsification
// loss v ↦ dhat(fixed domain, domain(v)). Nodes are restricted to affine ops,
// absolute value, and binary min/max; order-gated absolute values are
// rewritten as ReLU compositions when the graph is built, so every node is
// piecewise linear and the backward pass routes through a single active child
// at each min/max. Ties pick the lowest-index child; abs at zero uses slope +1.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "erosion.hpp"
#include "geometry.hpp"

namespace sgpd {

enum class PLOp : std::uint8_t { input, constant, add, sub, neg, abs_val, max2, min2 };

struct PLNode {
    PLOp op;
    std::int32_t a = -1;  // input slot, constant index, or first child
    std::int32_t b = -1;  // second child where applicable
};

// Immutable after construction; children always precede parents. Evaluation
// state lives in PLWorkspace so concurrent passes over one graph are safe.
struct PLGraph {
    std::vector<PLNode> nodes;
    std::vector<double> constants;
    std::int32_t root = -1;
    std::size_t input_count = 0;

    [[nodiscard]] std::size_t size() const { return nodes.size(); }
};

struct PLWorkspace {
    std::vector<double> value;
    std::vector<std::int8_t> active;  // max2/min2: selected child 0/1; abs_val: sign
    std::vector<double> adjoint;
};

inline double pl_forward(const PLGraph& g, std::span<const double> inputs, PLWorkspace& ws) {
    if (inputs.size() != g.input_count) throw invalid_input("input vector length does not match the graph");
    if (g.root < 0) throw internal_error("graph has no root");
    ws.value.resize(g.nodes.size());
    ws.active.assign(g.nodes.size(), 0);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const PLNode& n = g.nodes[i];
        switch (n.op) {
            case PLOp::input: ws.value[i] = inputs[static_cast<std::size_t>(n.a)]; break;
            case PLOp::constant: ws.value[i] = g.constants[static_cast<std::size_t>(n.a)]; break;
            case PLOp::add: ws.value[i] = ws.value[n.a] + ws.value[n.b]; break;
            case PLOp::sub: ws.value[i] = ws.value[n.a] - ws.value[n.b]; break;
            case PLOp::neg: ws.value[i] = -ws.value[n.a]; break;
            case PLOp::abs_val: {
                const double v = ws.value[n.a];
                ws.active[i] = v >= 0.0 ? 1 : -1;
                ws.value[i] = v >= 0.0 ? v : -v;
                break;
            }
            case PLOp::max2: {
                const double va = ws.value[n.a], vb = ws.value[n.b];
                ws.active[i] = va >= vb ? 0 : 1;
                ws.value[i] = va >= vb ? va : vb;
                break;
            }
            case PLOp::min2: {
                const double va = ws.value[n.a], vb = ws.value[n.b];
                ws.active[i] = va <= vb ? 0 : 1;
                ws.value[i] = va <= vb ? va : vb;
                break;
            }
        }
    }
    return ws.value[static_cast<std::size_t>(g.root)];
}

// Reverse accumulation along the piece selected by the last forward pass.
// grad must have input_count slots; it is overwritten.
inline void pl_backward(const PLGraph& g, PLWorkspace& ws, std::span<double> grad) {
    if (grad.size() != g.input_count) throw invalid_input("gradient buffer length does not match the graph");
    if (ws.value.size() != g.nodes.size()) throw invalid_input("backward pass needs a completed forward pass");
    ws.adjoint.assign(g.nodes.size(), 0.0);
    std::fill(grad.begin(), grad.end(), 0.0);
    ws.adjoint[static_cast<std::size_t>(g.root)] = 1.0;
    for (std::size_t i = g.nodes.size(); i-- > 0;) {
        const double w = ws.adjoint[i];
        if (w == 0.0) continue;
        const PLNode& n = g.nodes[i];
        switch (n.op) {
            case PLOp::input: grad[static_cast<std::size_t>(n.a)] += w; break;
            case PLOp::constant: break;
            case PLOp::add:
                ws.adjoint[n.a] += w;
                ws.adjoint[n.b] += w;
                break;
            case PLOp::sub:
                ws.adjoint[n.a] += w;
                ws.adjoint[n.b] -= w;
                break;
            case PLOp::neg: ws.adjoint[n.a] -= w; break;
            case PLOp::abs_val: ws.adjoint[n.a] += ws.active[i] >= 0 ? w : -w; break;
            case PLOp::max2:
            case PLOp::min2: ws.adjoint[ws.active[i] == 0 ? n.a : n.b] += w; break;
        }
    }
}

// Distance from the last evaluation point to the nearest selection boundary
// that can change the output: the smallest |left - right| over min/max nodes
// and |child| over abs nodes, taken along the active path only. Ties inside
// losing subtrees cannot flip the selected piece under a small step, so they
// are ignored.
[[nodiscard]] inline double min_tie_margin(const PLGraph& g, const PLWorkspace& ws) {
    if (ws.value.size() != g.nodes.size()) throw invalid_input("tie margin needs a completed forward pass");
    double margin = std::numeric_limits<double>::infinity();
    std::vector<char> seen(g.nodes.size(), 0);
    std::vector<std::int32_t> stack{g.root};
    while (!stack.empty()) {
        const std::int32_t id = stack.back();
        stack.pop_back();
        if (seen[static_cast<std::size_t>(id)]) continue;
        seen[static_cast<std::size_t>(id)] = 1;
        const PLNode& n = g.nodes[static_cast<std::size_t>(id)];
        switch (n.op) {
            case PLOp::input:
            case PLOp::constant: break;
            case PLOp::add:
            case PLOp::sub:
                stack.push_back(n.a);
                stack.push_back(n.b);
                break;
            case PLOp::neg: stack.push_back(n.a); break;
            case PLOp::abs_val:
                margin = std::min(margin, std::fabs(ws.value[n.a]));
                stack.push_back(n.a);
                break;
            case PLOp::max2:
            case PLOp::min2:
                margin = std::min(margin, std::fabs(ws.value[n.a] - ws.value[n.b]));
                stack.push_back(ws.active[static_cast<std::size_t>(id)] == 0 ? n.a : n.b);
                break;
        }
    }
    return margin;
}

namespace detail {

struct GraphBuilder {
    PLGraph g;
    std::map<double, std::int32_t> const_ids;

    explicit GraphBuilder(std::size_t input_count) {
        g.input_count = input_count;
        g.nodes.reserve(input_count);
        for (std::size_t s = 0; s < input_count; ++s)
            g.nodes.push_back(PLNode{PLOp::input, static_cast<std::int32_t>(s), -1});
    }

    std::int32_t push(PLOp op, std::int32_t a, std::int32_t b) {
        g.nodes.push_back(PLNode{op, a, b});
        return static_cast<std::int32_t>(g.nodes.size() - 1);
    }
    [[nodiscard]] std::int32_t input(std::size_t slot) const { return static_cast<std::int32_t>(slot); }
    std::int32_t constant(double v) {
        const auto it = const_ids.find(v);
        if (it != const_ids.end()) return it->second;
        g.constants.push_back(v);
        const std::int32_t id = push(PLOp::constant, static_cast<std::int32_t>(g.constants.size() - 1), -1);
        const_ids.emplace(v, id);
        return id;
    }
    std::int32_t add(std::int32_t u, std::int32_t v) { return push(PLOp::add, u, v); }
    std::int32_t sub(std::int32_t u, std::int32_t v) { return push(PLOp::sub, u, v); }
    std::int32_t max2(std::int32_t u, std::int32_t v) { return push(PLOp::max2, u, v); }
    std::int32_t min2(std::int32_t u, std::int32_t v) { return push(PLOp::min2, u, v); }
    std::int32_t relu(std::int32_t u) { return max2(u, constant(0.0)); }
    // max(relu(w2 - w1), relu(w4 - w3)), the one-sided overhang.
    std::int32_t overhang(std::int32_t w1, std::int32_t w2, std::int32_t w3, std::int32_t w4) {
        return max2(relu(sub(w2, w1)), relu(sub(w4, w3)));
    }
};

} // namespace detail

// Builds the loss graph of v ↦ dhat(fixed, domain(v)) for m movable intervals.
// Inputs are the 6m embedding coordinates; the fixed domain's corner
// coordinates are folded into constants, so the forward pass performs exactly
// the arithmetic of the closed-form radius and matches dhat bitwise.
[[nodiscard]] inline PLGraph build_loss_graph(const Domain& fixed, std::size_t m) {
    if (fixed.size() == 0) throw invalid_input("loss graph needs a nonempty fixed domain");
    if (m == 0) throw invalid_input("loss graph needs at least one movable interval");
    const DomainVector fv = to_domain_vector(fixed);
    const std::size_t n = fixed.size();

    detail::GraphBuilder bld(6 * m);
    struct Corners {
        std::int32_t x, y, lo_x, lo_y, hi_x, hi_y;
    };
    std::vector<Corners> jc(m);
    for (std::size_t s = 0; s < m; ++s) {
        const std::int32_t jx = bld.input(6 * s + 0), jy = bld.input(6 * s + 1);
        const std::int32_t je = bld.input(6 * s + 2), jf = bld.input(6 * s + 3);
        const std::int32_t jg = bld.input(6 * s + 4), jh = bld.input(6 * s + 5);
        jc[s] = Corners{jx, jy, bld.sub(jx, jf), bld.sub(jy, jg), bld.add(jx, jh), bld.add(jy, je)};
    }

    std::vector<std::int32_t> eps(n * m);
    for (std::size_t r = 0; r < n; ++r) {
        const IntervalVec6 vi = fv.at(r);
        const std::int32_t ix = bld.constant(vi.x), iy = bld.constant(vi.y);
        const std::int32_t ilx = bld.constant(vi.x - vi.b), ily = bld.constant(vi.y - vi.c);
        const std::int32_t ihx = bld.constant(vi.x + vi.d), ihy = bld.constant(vi.y + vi.a);
        for (std::size_t s = 0; s < m; ++s) {
            const Corners& j = jc[s];
            const std::int32_t min_into_i =
                bld.max2(bld.min2(bld.overhang(j.lo_x, ilx, j.y, iy), bld.overhang(j.lo_x, ix, j.y, ily)),
                         bld.min2(bld.overhang(j.x, ilx, j.lo_y, iy), bld.overhang(j.x, ix, j.lo_y, ily)));
            const std::int32_t max_into_i = bld.overhang(ihx, j.hi_x, ihy, j.hi_y);
            const std::int32_t min_into_j =
                bld.max2(bld.min2(bld.overhang(ilx, j.lo_x, iy, j.y), bld.overhang(ilx, j.x, iy, j.lo_y)),
                         bld.min2(bld.overhang(ix, j.lo_x, ily, j.y), bld.overhang(ix, j.x, ily, j.lo_y)));
            const std::int32_t max_into_j = bld.overhang(j.hi_x, ihx, j.hi_y, ihy);
            eps[r * m + s] =
                bld.max2(bld.max2(min_into_i, max_into_i), bld.max2(min_into_j, max_into_j));
        }
    }

    std::int32_t row_side = -1;
    for (std::size_t r = 0; r < n; ++r) {
        std::int32_t row_min = eps[r * m];
        for (std::size_t s = 1; s < m; ++s) row_min = bld.min2(row_min, eps[r * m + s]);
        row_side = r == 0 ? row_min : bld.max2(row_side, row_min);
    }
    std::int32_t col_side = -1;
    for (std::size_t s = 0; s < m; ++s) {
        std::int32_t col_min = eps[s];
        for (std::size_t r = 1; r < n; ++r) col_min = bld.min2(col_min, eps[r * m + s]);
        col_side = s == 0 ? col_min : bld.max2(col_side, col_min);
    }
    bld.g.root = bld.max2(row_side, col_side);
    return std::move(bld.g);
}

struct LossGradient {
    double loss = 0.0;
    std::vector<double> grad;
};

[[nodiscard]] inline LossGradient loss_and_gradient(const PLGraph& g, std::span<const double> inputs) {
    PLWorkspace ws;
    LossGradient out;
    out.loss = pl_forward(g, inputs, ws);
    out.grad.resize(g.input_count);
    pl_backward(g, ws, out.grad);
    return out;
}

// Nonnegativity reparametrization of a domain vector: positions pass through,
// side lengths go through ReLU. The derivative of each clamp is 1 at and above
// zero, 0 below.
inline void reparam_nonneg(std::span<const double> raw, std::span<double> out) {
    if (raw.size() != out.size() || raw.size() % 6 != 0)
        throw invalid_input("reparametrization needs matching lengths in multiples of 6");
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const std::size_t slot = i % 6;
        out[i] = (slot <= 1) ? raw[i] : relu(raw[i]);
    }
}

inline void reparam_nonneg_backward(std::span<const double> raw, std::span<const double> grad_out,
                                    std::span<double> grad_raw) {
    if (raw.size() != grad_out.size() || raw.size() != grad_raw.size())
        throw invalid_input("reparametrization gradient needs matching lengths");
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const std::size_t slot = i % 6;
        grad_raw[i] = (slot <= 1 || raw[i] >= 0.0) ? grad_out[i] : 0.0;
    }
}

// DOT rendering of the subgraph the last forward pass actually selected:
// min/max nodes descend only into their active child.
[[nodiscard]] inline std::string active_path_dot(const PLGraph& g, const PLWorkspace& ws) {
    if (ws.value.size() != g.nodes.size()) throw invalid_input("active path needs a completed forward pass");
    static constexpr const char* op_names[] = {"input", "const", "add", "sub", "neg", "abs", "max", "min"};
    std::vector<char> seen(g.nodes.size(), 0);
    std::vector<std::int32_t> stack{g.root};
    std::ostringstream nodes, edges;
    while (!stack.empty()) {
        const std::int32_t i = stack.back();
        stack.pop_back();
        if (seen[static_cast<std::size_t>(i)]) continue;
        seen[static_cast<std::size_t>(i)] = 1;
        const PLNode& n = g.nodes[static_cast<std::size_t>(i)];
        nodes << "  n" << i << " [label=\"" << op_names[static_cast<int>(n.op)] << "\\nv="
              << ws.value[static_cast<std::size_t>(i)] << "\"];\n";
        const auto descend = [&](std::int32_t child) {
            edges << "  n" << i << " -> n" << child << ";\n";
            stack.push_back(child);
        };
        switch (n.op) {
            case PLOp::input:
            case PLOp::constant: break;
            case PLOp::neg:
            case PLOp::abs_val: descend(n.a); break;
            case PLOp::add:
            case PLOp::sub:
                descend(n.a);
                descend(n.b);
                break;
            case PLOp::max2:
            case PLOp::min2: descend(ws.active[static_cast<std::size_t>(i)] == 0 ? n.a : n.b); break;
        }
    }
    return "digraph active_path {\n" + nodes.str() + edges.str() + "}\n";
}

} // namespace sgpd
