// Command-line front end: domain generation, distances, diagram computation,
// domain sparsification, vectorization, embedding, and randomized oracle
// suites. Exit codes: 0 success, 2 invalid arguments, 3 file-format violation,
// 4 internal invariant failure.

#include "sgpd/sgpd.hpp"

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace {

using namespace sgpd;

void print_real(double v) {
    if (std::isinf(v)) {
        std::puts(v > 0 ? "inf" : "-inf");
        return;
    }
    std::printf("%.12g\n", v);
}

// Joint rescaling of every file ingested by one invocation onto the unit box.
struct Ingest {
    bool normalize = false;
    UnitNormalizer nz;
    std::vector<Domain> domains;
    std::vector<Barcode> barcodes;

    std::size_t add_domain(const std::string& path) {
        domains.push_back(read_domain_json(path));
        if (normalize) nz.include(domains.back());
        return domains.size() - 1;
    }
    std::size_t add_barcode(const std::string& path) {
        barcodes.push_back(read_barcode_json(path));
        if (normalize) nz.include(barcodes.back());
        return barcodes.size() - 1;
    }
    [[nodiscard]] Domain domain(std::size_t i) const { return normalize ? nz.apply(domains[i]) : domains[i]; }
    [[nodiscard]] Barcode barcode(std::size_t i) const { return normalize ? nz.apply(barcodes[i]) : barcodes[i]; }
};

struct GridArgs {
    std::string out, name = "grid";
    int nxy = 10, nsides = 2;
    double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0, side_lo = 0.0, side_hi = 0.5;
};

struct DistanceArgs {
    std::string domain_a, domain_b, matrix;
    bool normalize = false;
};

struct GpdArgs {
    std::string barcode, domain, out;
    bool normalize = false;
};

struct SedArgs {
    std::string barcode_a, domain_a, barcode_b, domain_b;
    bool normalize = false;
};

struct OptimizeArgs {
    std::string full, out, trace, config, init, dump_active_path;
    std::optional<std::size_t> m;
    std::optional<int> epochs;
    std::optional<double> lr, momentum, decay;
    std::optional<std::uint64_t> seed;
};

struct VectorizeArgs {
    std::string gpd, out;
    int bins = 4;
    double sigma = 0.5;
};

struct EmbedArgs {
    std::string series, label, out;
    std::size_t dim = 3;
};

struct OracleArgs {
    std::string suite, report;
    int cases = 100;
};

int run_grid(const GridArgs& a) {
    const Domain dom = grid_domain(a.name, a.nxy, a.nsides, a.x_lo, a.x_hi, a.y_lo, a.y_hi, a.side_lo, a.side_hi);
    write_domain_json(a.out, dom);
    std::printf("%zu\n", dom.size());
    return 0;
}

int run_distance(const DistanceArgs& a, int threads) {
    Ingest in;
    in.normalize = a.normalize;
    const std::size_t ia = in.add_domain(a.domain_a);
    const std::size_t ib = in.add_domain(a.domain_b);
    const EpsilonMatrix em = epsilon_matrix(in.domain(ia), in.domain(ib), resolve_thread_count(threads));
    if (!a.matrix.empty()) write_epsilon_matrix_csv(a.matrix, em);
    print_real(dhat(em));
    return 0;
}

int run_gpd(const GpdArgs& a) {
    Ingest in;
    in.normalize = a.normalize;
    const std::size_t ib = in.add_barcode(a.barcode);
    const std::size_t id = in.add_domain(a.domain);
    const GPD dgm = mobius_inversion(gri(in.barcode(ib), in.domain(id)));
    write_gpd_csv(a.out, gpd_points(dgm));
    if (dgm.merged_duplicates) std::fputs("note: duplicate domain intervals were merged\n", stderr);
    std::printf("%zu\n", gpd_points(dgm).size());
    return 0;
}

int run_sed(const SedArgs& a) {
    Ingest in;
    in.normalize = a.normalize;
    const std::size_t ma = in.add_barcode(a.barcode_a);
    const std::size_t da = in.add_domain(a.domain_a);
    const std::size_t mb = in.add_barcode(a.barcode_b);
    const std::size_t db = in.add_domain(a.domain_b);
    print_real(sparse_erosion_distance(in.barcode(ma), in.domain(da), in.barcode(mb), in.domain(db)));
    return 0;
}

int run_optimize(const OptimizeArgs& a, std::uint64_t global_seed, bool seed_set) {
    const Domain full = read_domain_json(a.full);
    OptimConfig cfg;
    if (!a.config.empty()) cfg = read_optim_config_json(a.config);
    if (a.m) cfg.m = *a.m;
    if (a.epochs) cfg.epochs = *a.epochs;
    if (a.lr) cfg.lr = *a.lr;
    if (a.momentum) cfg.momentum = *a.momentum;
    if (a.decay) cfg.lr_decay = *a.decay;
    if (a.seed)
        cfg.seed = *a.seed;
    else if (seed_set)
        cfg.seed = global_seed;

    OptimResult res;
    if (a.init.empty()) {
        res = optimize(full, cfg);
    } else {
        const Domain init = read_domain_json(a.init);
        if (cfg.m != 0 && cfg.m != init.size())
            throw invalid_input("m disagrees with the explicit initial domain size");
        res = optimize(full, cfg, to_domain_vector(init));
    }

    if (!a.out.empty()) write_domain_json(a.out, res.sparse);
    if (!a.trace.empty()) write_trace_csv(a.trace, res.trace);
    if (!a.dump_active_path.empty()) {
        const PLGraph graph = build_loss_graph(full, res.sparse.size());
        PLWorkspace ws;
        pl_forward(graph, res.best.coords, ws);
        write_text_file(a.dump_active_path, active_path_dot(graph, ws));
    }
    print_real(res.best_loss);
    return 0;
}

int run_vectorize(const VectorizeArgs& a) {
    const std::vector<GPDPoint> pts = read_gpd_csv(a.gpd);
    const std::array<int, 6> bins{a.bins, a.bins, a.bins, a.bins, a.bins, a.bins};
    const Histogram hist = histogram_vectorize(pts, auto_grid(pts, bins), a.sigma);
    write_histogram_csv(a.out, hist);
    return 0;
}

int run_embed(const EmbedArgs& a) {
    const std::vector<TimeSeries> series = read_timeseries_csv(a.series);
    const TimeSeries* pick = &series.front();
    if (!a.label.empty()) {
        pick = nullptr;
        for (const TimeSeries& ts : series)
            if (ts.label == a.label) {
                pick = &ts;
                break;
            }
        if (!pick) throw invalid_input("no series labelled '" + a.label + "' in the file");
    }
    write_point_cloud_csv(a.out, time_delay_embed(pick->samples, a.dim));
    return 0;
}

int run_oracle_check(const OracleArgs& a, std::uint64_t seed) {
    if (a.cases < 1) throw invalid_input("--cases must be positive");
    Rng rng(seed);
    std::string report = "case,ok,lhs,rhs,tol\n";
    int bad = 0;
    const auto record = [&](int idx, bool ok, double lhs, double rhs, double tol) {
        if (!ok) ++bad;
        report += std::to_string(idx) + ',' + (ok ? "1" : "0") + ',' + fmt_double(lhs) + ',' + fmt_double(rhs) +
                  ',' + fmt_double(tol) + '\n';
    };

    if (a.suite == "eps") {
        for (int i = 0; i < a.cases; ++i) {
            const IntervalVec6 u = sample_vec6(rng), v = sample_vec6(rng);
            const double closed = eps_21(u, v);
            const double general = eps_pq(decode_vec6(u), decode_vec6(v));
            record(i, std::fabs(closed - general) <= 1e-12, closed, general, 1e-12);
        }
    } else if (a.suite == "dhat") {
        for (int i = 0; i < a.cases; ++i) {
            Domain A = sample_fat_domain(rng, "a", 2 + sample_below(rng, 4));
            Domain B = sample_fat_domain(rng, "b", 2 + sample_below(rng, 4));
            Box2 bb = bounding_box(A.intervals.front());
            for (const PQInterval& iv : A.intervals) bb = join(bb, bounding_box(iv));
            for (const PQInterval& iv : B.intervals) bb = join(bb, bounding_box(iv));
            const double h = std::max(bb.hi.x - bb.lo.x, bb.hi.y - bb.lo.y) / 256.0;
            const double exact = dhat(A, B);
            const double approx = brute_dhat(A, B);
            record(i, std::fabs(exact - approx) <= 2.0 * h + 1e-12, exact, approx, 2.0 * h);
        }
    } else if (a.suite == "mobius") {
        for (int i = 0; i < a.cases; ++i) {
            const Barcode bc = sample_barcode(rng, 1, 4);
            const Domain dom = sample_pq_domain(rng, "dom", 1 + sample_below(rng, 8));
            const GRITable table = gri(bc, dom);
            const GPD fast = mobius_inversion(table);
            const GPD brute = brute_mobius(table);
            const bool ok = fast.values == brute.values;
            record(i, ok, static_cast<double>(fast.domain.size()), static_cast<double>(brute.domain.size()), 0.0);
        }
    } else if (a.suite == "lipschitz") {
        for (int i = 0; i < a.cases; ++i) {
            const Domain K = sample_vec6_domain(rng, "k", 1 + sample_below(rng, 3));
            const Domain J1 = sample_vec6_domain(rng, "j1", 1 + sample_below(rng, 5));
            Domain J2 = sample_vec6_domain(rng, "j2", J1.size());
            const LipschitzCheck chk = brute_lipschitz(K, J1, J2);
            record(i, chk.distance_gap <= 2.0 * chk.min_perm_linf + 1e-12, chk.distance_gap,
                   2.0 * chk.min_perm_linf, 1e-12);
        }
    } else {
        throw invalid_input("unknown oracle suite '" + a.suite + "' (expected eps, dhat, mobius or lipschitz)");
    }

    if (!a.report.empty()) write_text_file(a.report, report);
    std::printf("%s: %d/%d ok\n", a.suite.c_str(), a.cases - bad, a.cases);
    if (bad) throw internal_error("oracle disagreement in suite " + a.suite);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse interval domains for generalized persistence diagrams"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    int threads = 0;
    app.add_option("--seed", seed, "Seed for randomized subcommands");
    app.add_option("--threads", threads, "Worker threads (0: GPD_SPARSIFY_THREADS env var, then 1)");

    GridArgs grid;
    CLI::App* c_grid = app.add_subcommand("grid", "Generate a regular grid domain");
    c_grid->add_option("--nxy", grid.nxy, "Grid points per position axis")->required();
    c_grid->add_option("--nsides", grid.nsides, "Grid points per side-length axis")->required();
    c_grid->add_option("--out", grid.out, "Output domain JSON")->required();
    c_grid->add_option("--name", grid.name, "Domain name");
    c_grid->add_option("--x-lo", grid.x_lo, "Low end of the x range");
    c_grid->add_option("--x-hi", grid.x_hi, "High end of the x range");
    c_grid->add_option("--y-lo", grid.y_lo, "Low end of the y range");
    c_grid->add_option("--y-hi", grid.y_hi, "High end of the y range");
    c_grid->add_option("--side-lo", grid.side_lo, "Low end of the side ranges");
    c_grid->add_option("--side-hi", grid.side_hi, "High end of the side ranges");

    DistanceArgs dist;
    CLI::App* c_dist = app.add_subcommand("distance", "Hausdorff-style interval-domain distance");
    c_dist->add_option("--domain-a", dist.domain_a, "First domain JSON")->required();
    c_dist->add_option("--domain-b", dist.domain_b, "Second domain JSON")->required();
    c_dist->add_option("--matrix", dist.matrix, "Optional CSV dump of the epsilon matrix");
    c_dist->add_flag("--normalize", dist.normalize, "Rescale the joint bounding box onto the unit square first");

    GpdArgs gpd;
    CLI::App* c_gpd = app.add_subcommand("gpd", "Generalized persistence diagram of a barcode over a domain");
    c_gpd->add_option("--barcode", gpd.barcode, "Barcode JSON")->required();
    c_gpd->add_option("--domain", gpd.domain, "Domain JSON")->required();
    c_gpd->add_option("--out", gpd.out, "Output diagram CSV")->required();
    c_gpd->add_flag("--normalize", gpd.normalize, "Rescale the joint bounding box onto the unit square first");

    SedArgs sed;
    CLI::App* c_sed = app.add_subcommand("sed", "Sparse erosion distance between two observed modules");
    c_sed->add_option("--barcode-a", sed.barcode_a, "First barcode JSON")->required();
    c_sed->add_option("--domain-a", sed.domain_a, "First domain JSON")->required();
    c_sed->add_option("--barcode-b", sed.barcode_b, "Second barcode JSON")->required();
    c_sed->add_option("--domain-b", sed.domain_b, "Second domain JSON")->required();
    c_sed->add_flag("--normalize", sed.normalize, "Rescale the joint bounding box onto the unit square first");

    OptimizeArgs opt;
    CLI::App* c_opt = app.add_subcommand("optimize", "Sparsify a domain by subgradient descent");
    c_opt->add_option("--full", opt.full, "Full domain JSON")->required();
    c_opt->add_option("--m", opt.m, "Size of the sparse domain");
    c_opt->add_option("--epochs", opt.epochs, "Descent epochs");
    c_opt->add_option("--lr", opt.lr, "Learning rate");
    c_opt->add_option("--momentum", opt.momentum, "Heavy-ball momentum");
    c_opt->add_option("--decay", opt.decay, "Per-epoch learning-rate decay");
    c_opt->add_option("--seed", opt.seed, "Seed for the initial subset draw");
    c_opt->add_option("--config", opt.config, "JSON config file (explicit flags win)");
    c_opt->add_option("--init", opt.init, "Explicit initial domain JSON");
    c_opt->add_option("--out", opt.out, "Output sparse domain JSON");
    c_opt->add_option("--trace", opt.trace, "Output per-epoch loss CSV");
    c_opt->add_option("--dump-active-path", opt.dump_active_path,
                      "Write the loss graph's active path as DOT at the best iterate");

    VectorizeArgs vec;
    CLI::App* c_vec = app.add_subcommand("vectorize", "Smoothed histogram vector of a diagram CSV");
    c_vec->add_option("--gpd", vec.gpd, "Diagram CSV")->required();
    c_vec->add_option("--out", vec.out, "Output histogram CSV")->required();
    c_vec->add_option("--bins", vec.bins, "Bins per axis");
    c_vec->add_option("--sigma", vec.sigma, "Gaussian bandwidth in bins (0: none)");

    EmbedArgs emb;
    CLI::App* c_emb = app.add_subcommand("embed", "Time-delay embedding of a labelled series");
    c_emb->add_option("--series", emb.series, "Time-series CSV (label, samples...)")->required();
    c_emb->add_option("--out", emb.out, "Output point-cloud CSV")->required();
    c_emb->add_option("--label", emb.label, "Series label (default: first row)");
    c_emb->add_option("--dim", emb.dim, "Embedding dimension");

    OracleArgs ora;
    CLI::App* c_ora = app.add_subcommand("oracle-check", "Randomized cross-checks against brute-force oracles");
    c_ora->add_option("--suite", ora.suite, "One of: eps, dhat, mobius, lipschitz")->required();
    c_ora->add_option("--cases", ora.cases, "Number of random cases");
    c_ora->add_option("--report", ora.report, "Per-case CSV report");

    try {
        app.parse(argc, argv);
        if (c_grid->parsed()) return run_grid(grid);
        if (c_dist->parsed()) return run_distance(dist, threads);
        if (c_gpd->parsed()) return run_gpd(gpd);
        if (c_sed->parsed()) return run_sed(sed);
        if (c_opt->parsed()) return run_optimize(opt, seed, app.count("--seed") > 0);
        if (c_vec->parsed()) return run_vectorize(vec);
        if (c_emb->parsed()) return run_embed(emb);
        if (c_ora->parsed()) return run_oracle_check(ora, seed);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const invalid_input& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const format_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 4;
    }
}
