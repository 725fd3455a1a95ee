// opkit command line: dot-test runner, matvec benchmark, and the
// irregular-sampling interpolation experiment. Emits JSON and CSV.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "opkit/interp.hpp"
#include "opkit/leaf_ops.hpp"
#include "opkit/solve.hpp"
#include "opkit/validate.hpp"

using json = nlohmann::ordered_json;
using namespace opkit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailed = 1;
constexpr int kExitUsage = 2;

// ---------------------------------------------------------------------------
// op-spec mini grammar:
//   identity | diagonal | restriction | deriv1 | deriv2 | dft | broken-demo
//   | adjoint(<spec>) | chain(<spec>,<spec>) | sum(<spec>,<spec>)
//   | scale(<real>,<spec>) | vstack(<spec>,...)
// Leaves are sized from --n; restriction draws indices from --indices-seed.
// ---------------------------------------------------------------------------

struct OpSpecContext {
    Index n = 64;
    double sample_fraction = 0.25;
    std::uint64_t indices_seed = 0;
};

// Negative control: forward is the two-point difference, adjoint is a plain
// zero-pad with none of the stencil's sign structure. Must fail the dot-test.
class BrokenDemoOp final : public Operator {
public:
    explicit BrokenDemoOp(Index n) : Operator({n - 1, n}, false) {}

    Vec apply(const Vec& x) const override {
        return x.tail(rows()) - x.head(rows());
    }
    Vec apply_adjoint(const Vec& y) const override {
        Vec x = Vec::Zero(cols());
        x.head(rows()) = y;
        return x;
    }
};

std::vector<Index> draw_indices(Index n, double fraction, std::uint64_t seed) {
    const Index count =
        std::max<Index>(1, static_cast<Index>(std::floor(fraction * double(n))));
    std::vector<Index> all(static_cast<size_t>(n));
    std::iota(all.begin(), all.end(), Index(0));
    std::mt19937_64 rng(seed);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(static_cast<size_t>(count));
    std::sort(all.begin(), all.end());
    return all;
}

class OpSpecParser {
public:
    OpSpecParser(std::string text, const OpSpecContext& ctx)
        : text_(std::move(text)), ctx_(ctx) {}

    OpPtr parse() {
        OpPtr op = parse_spec();
        skip_ws();
        if (pos_ != text_.size()) {
            throw std::invalid_argument("trailing characters in op spec at position " +
                                        std::to_string(pos_));
        }
        return op;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != c) {
            throw std::invalid_argument(std::string("expected '") + c + "' in op spec");
        }
        ++pos_;
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::string read_word() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '-' || text_[pos_] == '_')) {
            ++pos_;
        }
        if (start == pos_) throw std::invalid_argument("expected operator name in op spec");
        return text_.substr(start, pos_ - start);
    }

    double read_real() {
        skip_ws();
        size_t consumed = 0;
        double v = std::stod(text_.substr(pos_), &consumed);
        pos_ += consumed;
        return v;
    }

    OpPtr parse_spec() {
        const std::string word = read_word();
        if (word == "identity") return identity(ctx_.n);
        if (word == "diagonal") {
            Vec d(ctx_.n);
            for (Index k = 0; k < ctx_.n; ++k) {
                d[k] = Complex(1.0 + double(k % 7), 0.5 * double(k % 3));
            }
            return diagonal(std::move(d));
        }
        if (word == "restriction") {
            return restriction(ctx_.n,
                               draw_indices(ctx_.n, ctx_.sample_fraction, ctx_.indices_seed));
        }
        if (word == "deriv1") return first_derivative(ctx_.n, 1.0);
        if (word == "deriv2") return second_derivative(ctx_.n, 1.0);
        if (word == "dft") return dft(ctx_.n);
        if (word == "broken-demo") return std::make_shared<BrokenDemoOp>(ctx_.n);
        if (word == "adjoint") {
            expect('(');
            OpPtr inner = parse_spec();
            expect(')');
            return op_adjoint(std::move(inner));
        }
        if (word == "chain") {
            expect('(');
            OpPtr a = parse_spec();
            expect(',');
            OpPtr b = parse_spec();
            expect(')');
            return op_compose(std::move(a), std::move(b));
        }
        if (word == "sum") {
            expect('(');
            OpPtr a = parse_spec();
            expect(',');
            OpPtr b = parse_spec();
            expect(')');
            return op_sum(std::move(a), std::move(b));
        }
        if (word == "scale") {
            expect('(');
            double alpha = read_real();
            expect(',');
            OpPtr a = parse_spec();
            expect(')');
            return op_scale(Complex(alpha, 0.0), std::move(a));
        }
        if (word == "vstack") {
            expect('(');
            std::vector<OpPtr> children;
            children.push_back(parse_spec());
            while (consume(',')) children.push_back(parse_spec());
            expect(')');
            return op_vstack(std::move(children));
        }
        throw std::invalid_argument("unknown operator '" + word + "' in op spec");
    }

    std::string text_;
    size_t pos_ = 0;
    OpSpecContext ctx_;
};

// ---------------------------------------------------------------------------
// dottest
// ---------------------------------------------------------------------------

int run_dottest(const std::string& op_spec, const OpSpecContext& ctx, int trials,
                double tol, std::uint64_t seed) {
    OpPtr op;
    try {
        op = OpSpecParser(op_spec, ctx).parse();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    const DotTestResult res = dottest(op, trials, tol, seed);
    json out;
    out["op"] = op_spec;
    out["shape"] = {op->rows(), op->cols()};
    out["trials"] = res.trials;
    out["tol"] = tol;
    out["passed"] = res.passed;
    out["worst_relative_error"] = res.worst_relative_error;
    out["worst_lhs"] = {res.lhs_sample.real(), res.lhs_sample.imag()};
    out["worst_rhs"] = {res.rhs_sample.real(), res.rhs_sample.imag()};
    std::cout << out.dump(2) << "\n";
    return res.passed ? kExitOk : kExitValidationFailed;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct TimingStats {
    double mean_seconds = 0.0;
    double std_seconds = 0.0;
};

TimingStats time_forward(const OpPtr& op, const Vec& x, int repeats) {
    using clock = std::chrono::steady_clock;
    Complex sink(0, 0);
    for (int w = 0; w < 3; ++w) sink += op->apply(x).sum();  // warm-up

    std::vector<double> samples(static_cast<size_t>(repeats));
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = clock::now();
        sink += op->apply(x).sum();
        const auto t1 = clock::now();
        samples[static_cast<size_t>(r)] =
            std::chrono::duration<double>(t1 - t0).count();
    }
    // Keep the result observable so the loop cannot be elided.
    if (std::isnan(sink.real())) std::cerr << "unexpected NaN in benchmark\n";

    TimingStats s;
    s.mean_seconds = std::accumulate(samples.begin(), samples.end(), 0.0) / repeats;
    if (repeats > 1) {
        double acc = 0.0;
        for (double v : samples) acc += (v - s.mean_seconds) * (v - s.mean_seconds);
        s.std_seconds = std::sqrt(acc / (repeats - 1));
    }
    return s;
}

OpPtr build_bench_op(const std::string& name, Index size) {
    if (name == "restriction") {
        // Subsampling by a factor of 10: every 10th model sample.
        std::vector<Index> idx;
        for (Index i = 0; i < size; i += 10) idx.push_back(i);
        return restriction(size, std::move(idx));
    }
    if (name == "deriv1") return first_derivative(size, 1.0);
    if (name == "dft") return dft(size);
    throw std::invalid_argument("unknown benchmark operator '" + name + "'");
}

int run_bench(const std::vector<std::string>& ops, const std::vector<std::string>& impls,
              std::vector<Index> sizes, int repeats, const std::string& out_path,
              Index dense_cap, std::uint64_t seed) {
    std::sort(sizes.begin(), sizes.end());
    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "error: cannot open '" << out_path << "' for writing\n";
        return kExitUsage;
    }
    out << "# forward-application timing, operator kernels vs dense matvec "
           "(sparse-CSR baseline intentionally omitted)\n";
    out << "op_name,impl,size,repeats,mean_seconds,std_seconds\n";
    for (const auto& op_name : ops) {
        for (const auto& impl : impls) {
            if (impl != "operator" && impl != "dense") {
                std::cerr << "error: unknown impl '" << impl << "'\n";
                return kExitUsage;
            }
            for (Index size : sizes) {
                OpPtr op;
                try {
                    op = build_bench_op(op_name, size);
                } catch (const std::exception& e) {
                    std::cerr << "error: " << e.what() << "\n";
                    return kExitUsage;
                }
                if (impl == "dense") {
                    if (op->rows() * op->cols() > dense_cap) {
                        out << op_name << ",dense," << size << "," << repeats
                            << ",skipped,skipped\n";
                        continue;
                    }
                    op = dense(materialize(op, dense_cap));
                }
                const Vec x = random_complex_vector(op->cols(), seed);
                const TimingStats t = time_forward(op, x, repeats);
                out << op_name << "," << impl << "," << size << "," << repeats << ","
                    << std::scientific << t.mean_seconds << "," << t.std_seconds
                    << std::defaultfloat << "\n";
            }
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// interp
// ---------------------------------------------------------------------------

json report_entry(const RecoveryResult& r) {
    json e;
    e["rel_l2_error"] = r.rel_l2_error;
    e["iterations"] = r.report.iterations;
    e["stop_reason"] = to_string(r.report.stop_reason);
    return e;
}

int run_interp_cmd(const InterpConfig& cfg, const std::string& out_dir) {
    InterpResult res;
    try {
        res = run_interp(cfg);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    const auto dir = std::filesystem::path(out_dir);

    std::ofstream csv(dir / "signals.csv");
    if (!csv) {
        std::cerr << "error: cannot write to '" << out_dir << "'\n";
        return kExitUsage;
    }
    csv << "t,x_true,y_mask,x_naive,x_reg,x_fista\n";
    csv << std::setprecision(17);
    size_t si = 0;
    for (Index t = 0; t < cfg.n; ++t) {
        csv << t << "," << res.x_true[t] << ",";
        if (si < res.sample_indices.size() && res.sample_indices[si] == t) {
            csv << res.y[static_cast<Index>(si)];
            ++si;
        }
        csv << "," << res.naive.x[t] << "," << res.regularized.x[t] << ","
            << res.fista.x[t] << "\n";
    }
    csv.close();

    json rep;
    rep["config"] = {
        {"n", cfg.n},
        {"sample_fraction", cfg.sample_fraction},
        {"freqs", cfg.freqs},
        {"amps", cfg.amps},
        {"seed", cfg.seed},
        {"eps", cfg.eps},
        {"tau_factor", cfg.tau_factor},
        {"tau", res.tau},
        {"max_iters", cfg.max_iters},
        {"tol", cfg.tol},
    };
    rep["naive"] = report_entry(res.naive);
    rep["regularized"] = report_entry(res.regularized);
    rep["fista"] = report_entry(res.fista);
    rep["fista"]["recovered_support"] = res.recovered_support;
    rep["true_support"] = res.true_support;

    std::ofstream jf(dir / "report.json");
    if (!jf) {
        std::cerr << "error: cannot write to '" << out_dir << "'\n";
        return kExitUsage;
    }
    jf << rep.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"matrix-free linear operator toolkit"};
    app.require_subcommand(1);

    // dottest
    auto* dot = app.add_subcommand("dottest", "adjoint correctness check for an operator spec");
    std::string op_spec = "identity";
    OpSpecContext ctx;
    int trials = 100;
    double dot_tol = 1e-10;
    std::uint64_t dot_seed = 0;
    dot->add_option("--op", op_spec, "operator spec, e.g. chain(restriction, adjoint(dft))");
    dot->add_option("--n", ctx.n, "model-space size for leaves")->check(CLI::PositiveNumber);
    dot->add_option("--sample-fraction", ctx.sample_fraction, "restriction sampling fraction");
    dot->add_option("--indices-seed", ctx.indices_seed, "seed for restriction indices");
    dot->add_option("--trials", trials, "number of random trials")->check(CLI::PositiveNumber);
    dot->add_option("--tol", dot_tol, "relative tolerance");
    dot->add_option("--seed", dot_seed, "random seed for the test vectors");

    // bench
    auto* bench = app.add_subcommand("bench", "forward-application timing, operator vs dense");
    std::vector<std::string> bench_ops = {"restriction", "deriv1", "dft"};
    std::vector<std::string> bench_impls = {"operator", "dense"};
    std::vector<Index> bench_sizes = {1024, 2048, 4096, 8192, 16384};
    int repeats = 200;
    std::string bench_out = "bench.csv";
    Index dense_cap = Index(1) << 24;
    std::uint64_t bench_seed = 0;
    bench->add_option("--ops", bench_ops, "operators: restriction deriv1 dft");
    bench->add_option("--impls", bench_impls, "implementations: operator dense");
    bench->add_option("--sizes", bench_sizes, "model sizes");
    bench->add_option("--repeats", repeats, "forward applications per row")
        ->check(CLI::PositiveNumber);
    bench->add_option("--out", bench_out, "output CSV path");
    bench->add_option("--dense-cap", dense_cap,
                      "max dense-matrix entries before a size is skipped");
    bench->add_option("--seed", bench_seed, "seed for the input vector");

    // interp
    auto* interp = app.add_subcommand("interp", "irregular-sampling interpolation experiment");
    InterpConfig icfg;
    std::string out_dir = "interp_out";
    interp->add_option("--n", icfg.n, "signal length (power of two)");
    interp->add_option("--sample-fraction", icfg.sample_fraction, "fraction of samples kept");
    interp->add_option("--freqs", icfg.freqs, "sinusoid frequency bins");
    interp->add_option("--amps", icfg.amps, "sinusoid amplitudes");
    interp->add_option("--seed", icfg.seed, "sampling seed");
    interp->add_option("--eps", icfg.eps, "second-derivative regularization weight");
    interp->add_option("--tau-factor", icfg.tau_factor,
                       "l1 weight as a fraction of ||A^H y||_inf");
    interp->add_option("--max-iters", icfg.max_iters, "solver iteration cap");
    interp->add_option("--tol", icfg.tol, "solver tolerance");
    interp->add_option("--out-dir", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (dot->parsed()) return run_dottest(op_spec, ctx, trials, dot_tol, dot_seed);
        if (bench->parsed()) {
            return run_bench(bench_ops, bench_impls, bench_sizes, repeats, bench_out,
                             dense_cap, bench_seed);
        }
        if (interp->parsed()) return run_interp_cmd(icfg, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
