// End-to-end checks of the command-line tool. argv[1] is the path to the
// built binary, argv[2] a scratch directory for fixture and output files.
// Each subcommand is driven through a real process so exit codes, stdout
// formatting, and file side effects are all observed as a user would see them.

#include "sgpd/sgpd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

using namespace sgpd;

int g_failures = 0;

void expect(bool ok, const std::string& what) {
    if (!ok) {
        ++g_failures;
        std::fprintf(stderr, "FAILED: %s\n", what.c_str());
    }
}

std::string g_cli;
std::filesystem::path g_scratch;

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

[[nodiscard]] std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Runs the binary with the given arguments, capturing exit code and streams.
// `env_prefix` is prepended verbatim (e.g. "GPD_SPARSIFY_THREADS=3 ").
RunResult run(const std::string& args, const std::string& env_prefix = "") {
    const std::filesystem::path out_path = g_scratch / "run_stdout.txt";
    const std::filesystem::path err_path = g_scratch / "run_stderr.txt";
    const std::string cmd =
        env_prefix + g_cli + " " + args + " > " + out_path.string() + " 2> " + err_path.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    if (WIFEXITED(status)) r.code = WEXITSTATUS(status);
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

[[nodiscard]] std::filesystem::path at(const std::string& name) { return g_scratch / name; }

[[nodiscard]] PQInterval rect(double x0, double y0, double x1, double y1) {
    return make_interval({{x0, y0}}, {{x1, y1}});
}

void check_arg_handling() {
    expect(run("--help").code == 0, "--help exits 0");
    expect(run("").code == 2, "no subcommand exits 2");
    expect(run("frobnicate").code == 2, "unknown subcommand exits 2");
    expect(run("grid --nxy 4 --nsides 2 --out " + at("g.json").string() + " --bogus 1").code == 2,
           "unknown flag exits 2");
    expect(run("grid --nxy 4").code == 2, "missing required flag exits 2");
    expect(run("grid --nxy 0 --nsides 2 --out " + at("g.json").string()).code == 2,
           "invalid grid shape exits 2");
}

void check_grid() {
    const RunResult big = run("grid --nxy 10 --nsides 2 --out " + at("grid_big.json").string());
    expect(big.code == 0, "grid exits 0");
    expect(big.out == "1600\n", "10x10 grid with 2 side steps prints 1600, got: " + big.out);

    const RunResult small = run("grid --nxy 5 --nsides 2 --name mesh --out " + at("grid_small.json").string());
    expect(small.code == 0, "small grid exits 0");
    expect(small.out == "400\n", "5x5 grid with 2 side steps prints 400");

    const Domain dom = read_domain_json(at("grid_small.json"));
    expect(dom.size() == 400, "written grid file holds 400 intervals");
    expect(dom.name == "mesh", "--name reaches the output file");
    expect(!dom.vecs.empty(), "grid domains carry embedded coordinates");
}

void check_distance() {
    const Domain a{"a", {rect(0.0, 0.0, 1.0, 1.0)}, {encode_vec6(rect(0.0, 0.0, 1.0, 1.0))}};
    const Domain b{"b", {rect(1.0, 1.0, 2.0, 2.0)}, {encode_vec6(rect(1.0, 1.0, 2.0, 2.0))}};
    write_domain_json(at("unit.json"), a);
    write_domain_json(at("shifted.json"), b);

    const RunResult self = run("distance --domain-a " + at("unit.json").string() + " --domain-b " +
                               at("unit.json").string());
    expect(self.code == 0, "distance exits 0");
    expect(self.out == "0\n", "distance of a domain to itself prints 0, got: " + self.out);

    const std::string pair_args =
        "distance --domain-a " + at("unit.json").string() + " --domain-b " + at("shifted.json").string();
    const RunResult plain = run(pair_args);
    expect(plain.out == "1\n", "diagonally offset unit squares are at distance 1, got: " + plain.out);

    // The joint bounding box [0,2]^2 maps onto the unit square, halving scale.
    const RunResult norm = run(pair_args + " --normalize");
    expect(norm.out == "0.5\n", "normalized distance is halved, got: " + norm.out);

    const RunResult mat = run(pair_args + " --matrix " + at("eps.csv").string());
    expect(mat.code == 0, "distance with --matrix exits 0");
    const std::string csv = slurp(at("eps.csv"));
    expect(csv.rfind("r,s,eps\n", 0) == 0, "epsilon matrix CSV starts with its header");
    expect(csv == "r,s,eps\n0,0,1\n", "1x1 epsilon matrix body, got: " + csv);

    // Worker count must not change the result.
    const RunResult t1 = run("--threads 1 " + pair_args);
    const RunResult t4 = run("--threads 4 " + pair_args);
    const RunResult env = run(pair_args, "GPD_SPARSIFY_THREADS=3 ");
    expect(t1.out == plain.out && t4.out == plain.out && env.out == plain.out,
           "distance is identical across thread counts");

    expect(run("distance --domain-a " + at("missing.json").string() + " --domain-b " +
               at("unit.json").string())
                   .code == 3,
           "missing input file exits 3");
    write_text_file(at("broken.json"), "{ not json");
    expect(run("distance --domain-a " + at("broken.json").string() + " --domain-b " +
               at("unit.json").string())
                   .code == 3,
           "malformed JSON exits 3");
}

void check_gpd_and_sed() {
    const Barcode bc = make_barcode({{rect(0.0, 0.0, 2.0, 2.0), 1}});
    const Domain dom{"d", {rect(0.0, 0.0, 1.0, 1.0)}, {}};
    write_barcode_json(at("bars.json"), bc);
    write_domain_json(at("dom.json"), dom);

    const RunResult g = run("gpd --barcode " + at("bars.json").string() + " --domain " +
                            at("dom.json").string() + " --out " + at("dgm.csv").string());
    expect(g.code == 0, "gpd exits 0");
    expect(g.out == "1\n", "single containing bar yields one diagram point, got: " + g.out);
    const std::vector<GPDPoint> pts = read_gpd_csv(at("dgm.csv"));
    expect(pts.size() == 1, "diagram CSV holds one point");
    if (pts.size() == 1) {
        expect(pts[0].multiplicity == 1, "diagram point has multiplicity 1");
        expect(pts[0].v == encode_vec6(rect(0.0, 0.0, 1.0, 1.0)), "diagram point sits at the domain interval");
    }

    const std::string sed_args = "sed --barcode-a " + at("bars.json").string() + " --domain-a " +
                                 at("dom.json").string() + " --barcode-b " + at("bars.json").string() +
                                 " --domain-b " + at("dom.json").string();
    const RunResult s = run(sed_args);
    expect(s.code == 0, "sed exits 0");
    expect(s.out == "0\n", "sed of a module against itself prints 0, got: " + s.out);
}

void check_optimize() {
    run("grid --nxy 2 --nsides 2 --name full --out " + at("full.json").string());
    const std::string base = "optimize --full " + at("full.json").string() +
                             " --m 3 --epochs 30 --lr 0.002 --seed 7 --out " + at("sparse.json").string() +
                             " --trace " + at("trace.csv").string() + " --dump-active-path " +
                             at("path.dot").string();
    const RunResult r = run(base);
    expect(r.code == 0, "optimize exits 0");

    const Domain sparse = read_domain_json(at("sparse.json"));
    expect(sparse.size() == 3, "sparse output holds m intervals");
    expect(sparse.name == "full-sparse", "sparse domain name appends -sparse");

    const LossTrace trace = parse_trace_csv(read_text_file(at("trace.csv")));
    expect(trace.loss.size() == 31, "trace holds epochs + 1 rows");

    const std::string dot = slurp(at("path.dot"));
    expect(dot.rfind("digraph active_path {", 0) == 0, "active-path dump is a DOT digraph");

    // The reported loss must agree with an independent distance run on the
    // emitted files, to every printed digit.
    const RunResult d = run("distance --domain-a " + at("full.json").string() + " --domain-b " +
                            at("sparse.json").string());
    expect(d.out == r.out, "optimize loss matches recomputed distance: " + r.out + " vs " + d.out);

    const RunResult again = run(base);
    expect(again.out == r.out, "same seed reproduces the same loss");

    const RunResult mismatch = run("optimize --full " + at("full.json").string() + " --m 5 --init " +
                                   at("sparse.json").string());
    expect(mismatch.code == 2, "--m disagreeing with --init exits 2");
    expect(run("optimize --full " + at("full.json").string()).code == 2,
           "optimize without --m or --init exits 2");
}

void check_vectorize_and_embed() {
    const RunResult v = run("vectorize --gpd " + at("dgm.csv").string() + " --out " + at("hist.csv").string() +
                            " --bins 2 --sigma 0");
    expect(v.code == 0, "vectorize exits 0");
    const std::string hist = slurp(at("hist.csv"));
    expect(hist.rfind("i0,i1,i2,i3,i4,i5,weight\n", 0) == 0, "histogram CSV starts with its header");
    std::istringstream lines(hist);
    std::string line;
    std::getline(lines, line);
    int rows = 0;
    double total = 0.0;
    while (std::getline(lines, line)) {
        ++rows;
        total += std::strtod(line.substr(line.rfind(',') + 1).c_str(), nullptr);
    }
    expect(rows == 64, "2 bins per axis gives 64 histogram rows");
    expect(std::fabs(total - 1.0) <= 1e-12, "unsmoothed histogram mass equals total multiplicity");

    write_text_file(at("series.csv"), "alpha,1,2,3,4\nbeta,5,6,7,8\n");
    const RunResult first = run("embed --series " + at("series.csv").string() + " --out " +
                                at("cloud.csv").string());
    expect(first.code == 0, "embed exits 0");
    expect(slurp(at("cloud.csv")) == "x0,x1,x2\n1,2,3\n2,3,4\n", "default embed takes the first series");

    const RunResult picked = run("embed --series " + at("series.csv").string() + " --label beta --out " +
                                 at("cloud2.csv").string());
    expect(picked.code == 0, "embed with --label exits 0");
    expect(slurp(at("cloud2.csv")) == "x0,x1,x2\n5,6,7\n6,7,8\n", "--label selects the named series");

    expect(run("embed --series " + at("series.csv").string() + " --label gamma --out " +
               at("cloud3.csv").string())
                   .code == 2,
           "unknown series label exits 2");
}

void check_oracle_suites() {
    for (const std::string suite : {"eps", "dhat", "mobius", "lipschitz"}) {
        const RunResult r = run("--seed 5 oracle-check --suite " + suite + " --cases 20");
        expect(r.code == 0, "oracle suite " + suite + " exits 0");
        expect(r.out == suite + ": 20/20 ok\n", "oracle suite " + suite + " passes all cases, got: " + r.out);
    }

    const RunResult rep = run("--seed 5 oracle-check --suite eps --cases 10 --report " +
                              at("report.csv").string());
    expect(rep.code == 0, "oracle report run exits 0");
    const std::string report = slurp(at("report.csv"));
    expect(report.rfind("case,ok,lhs,rhs,tol\n", 0) == 0, "oracle report starts with its header");
    expect(std::count(report.begin(), report.end(), '\n') == 11, "oracle report holds one row per case");

    expect(run("oracle-check --suite nonsense").code == 2, "unknown oracle suite exits 2");
    expect(run("oracle-check --suite eps --cases 0").code == 2, "--cases 0 exits 2");
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::fprintf(stderr, "usage: %s <cli-binary> <scratch-dir>\n", argv[0]);
        return 2;
    }
    g_cli = argv[1];
    g_scratch = argv[2];
    std::filesystem::create_directories(g_scratch);

    check_arg_handling();
    check_grid();
    check_distance();
    check_gpd_and_sed();
    check_optimize();
    check_vectorize_and_embed();
    check_oracle_suites();

    if (g_failures) {
        std::fprintf(stderr, "%d CLI check(s) failed\n", g_failures);
        return 1;
    }
    std::puts("all CLI checks passed");
    return 0;
}
