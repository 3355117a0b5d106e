// Copyright 2026 The sketchlab Authors
// SPDX-License-Identifier: Apache-2.0

// sketchlab command-line driver: kernels, applications, balance lab, bench.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sketchlab/sketchlab.hpp"

namespace sl = sketchlab;
using sl::index_t;

namespace {

using Input = std::variant<sl::CsrMatrix, sl::DenseMatrix>;
using Output = std::variant<sl::DenseMatrix, std::vector<double>, std::vector<index_t>>;

struct Params {
  std::string in;
  std::string preset;
  index_t scale = 1;
  std::string out;
  std::string report;
  std::string rhs;
  std::string bmat;
  std::string m_expr = "2d";
  std::string r_expr = "d^2";
  std::string r2_expr;
  index_t k = 0;
  double rcond = 1e-12;
  index_t batch = 0;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string gram_algo = "rowpart";
  std::string variant = "coo";
  bool unscaled = false;
  std::string method;
  double tol = 1e-10;
  int maxit = 100;
  // balance
  std::string balance_r = "512";
  index_t workers = 8;
  int trials = 1000;
  std::string bound = "hoeffding-absolute";
  bool instrumented = false;
  // bench
  int rounds = 3;
  int per_round = 5;
};

struct Dims {
  index_t n = 0;
  index_t d = 0;
  index_t k = 0;         // --k, else the preset's target dimension, else d
  index_t preset_k = 0;  // the preset's target dimension, else d
};

std::uint64_t seed_of(const Params& p) { return p.seed ? *p.seed : sl::seed_from_env(0); }

// Sizes like "512", "2d", "d^2", "10k", "10k-preset", "0.5n".
index_t eval_dim(const std::string& expr, const Dims& dims, const char* flag) {
  const auto bad = [&] { return sl::InputError(std::string(flag) + ": cannot parse size '" + expr + "'"); };
  if (expr.empty()) throw bad();
  std::size_t pos = 0;
  double coef = 1.0;
  if (std::isdigit(static_cast<unsigned char>(expr[0])) || expr[0] == '.') {
    try {
      coef = std::stod(expr, &pos);
    } catch (const std::exception&) {
      throw bad();
    }
  }
  const std::string sym = expr.substr(pos);
  double base = 1.0;
  if (sym.empty()) base = 1.0;
  else if (sym == "d") base = static_cast<double>(dims.d);
  else if (sym == "d^2" || sym == "d2") base = static_cast<double>(dims.d) * static_cast<double>(dims.d);
  else if (sym == "k") base = static_cast<double>(dims.k);
  else if (sym == "k-preset") base = static_cast<double>(dims.preset_k);
  else if (sym == "n") base = static_cast<double>(dims.n);
  else throw bad();
  const double v = std::ceil(coef * base);
  if (!(v >= 0.0) || v > 9.0e15) throw bad();
  return static_cast<index_t>(v);
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct Loaded {
  Input input;
  Dims dims;
};

Loaded load_input(const Params& p) {
  if (!p.in.empty() && !p.preset.empty()) throw sl::InputError("give either --in or --preset, not both");
  Loaded l;
  index_t preset_k = 0;
  if (!p.in.empty()) {
    if (!std::filesystem::exists(p.in)) throw sl::ResourceError("cannot open '" + p.in + "'");
    if (ends_with(p.in, ".mtx")) l.input = sl::read_matrix_market(p.in);
    else l.input = sl::read_dense(p.in);
  } else if (!p.preset.empty()) {
    const auto pr = sl::find_preset(p.preset, p.scale);
    if (!pr) throw sl::InputError("unknown preset '" + p.preset + "' or bad --scale");
    if (pr->sparse()) l.input = sl::generate_sparse(pr->n, pr->d, pr->density, seed_of(p), p.threads);
    else l.input = sl::generate_dense(pr->n, pr->d, seed_of(p), p.threads);
    preset_k = pr->k;
  } else {
    throw sl::InputError("an input is required: --in FILE or --preset NAME");
  }
  std::visit(
      [&](const auto& a) {
        l.dims.n = a.rows();
        l.dims.d = a.cols();
      },
      l.input);
  l.dims.preset_k = preset_k > 0 ? std::min(preset_k, l.dims.d) : l.dims.d;
  l.dims.k = p.k > 0 ? p.k : l.dims.preset_k;
  return l;
}

sl::SketchVariant parse_variant(const std::string& s) {
  if (s == "coo") return sl::SketchVariant::Coo;
  if (s == "bccs") return sl::SketchVariant::Bccs;
  throw sl::InputError("--variant must be coo or bccs");
}

sl::GramAlgo gram_algo_of(const Params& p) {
  const auto a = sl::parse_gram_algo(p.gram_algo);
  if (!a) throw sl::InputError("--gram-algo must be serial, lowmem or rowpart");
  return *a;
}

// Everything an operation needs, resolved once before timing.
struct Job {
  std::string op;
  index_t m = 0;
  index_t r = 0;
  index_t r2 = 0;
  sl::SketchConfig cfg;
  sl::SketchVariant variant = sl::SketchVariant::Coo;
  sl::GramAlgo gram_algo = sl::GramAlgo::RowPart;
  std::string method;
  sl::DenseMatrix b;          // rownorms right factor
  std::vector<double> rhs;    // lstsq right-hand side
  int threads = 0;
  double tol = 1e-10;
  int maxit = 100;
};

std::vector<double> load_vector(const std::string& path, index_t n) {
  const sl::DenseMatrix v = sl::read_dense(path);
  if (v.rows() * v.cols() != n)
    throw sl::InputError("'" + path + "' holds " + std::to_string(v.rows() * v.cols()) + " values, expected " +
                         std::to_string(n));
  const sl::DenseMatrix rm = v.to_layout(sl::Layout::RowMajor);
  return {rm.data().begin(), rm.data().end()};
}

Job plan(const std::string& op, const Params& p, const Dims& dims) {
  Job j;
  j.op = op;
  j.threads = p.threads;
  j.method = p.method;
  j.tol = p.tol;
  j.maxit = p.maxit;
  j.variant = parse_variant(p.variant);
  j.gram_algo = gram_algo_of(p);
  const bool uses_m = op == "sketch-gauss" || op == "sketch-cg" || op == "css" || op == "lstsq" || op == "leverage" ||
                      op == "rownorms";
  const bool uses_r = op == "sketch-cs" || op == "sketch-cg" || op == "css" || op == "lstsq" || op == "leverage";
  if (uses_m) j.m = eval_dim(p.m_expr, dims, "--m");
  if (uses_r) j.r = eval_dim(p.r_expr, dims, "--r");
  j.cfg.m = j.m;
  j.cfg.r = std::max<index_t>(j.r, 1);
  j.cfg.k = p.k;
  j.cfg.rcond = p.rcond;
  j.cfg.batch = p.batch;
  j.cfg.seed = seed_of(p);
  j.cfg.scale_gaussian = !p.unscaled;
  if (op == "rownorms") {
    if (!p.bmat.empty()) {
      j.b = sl::read_dense(p.bmat);
    } else {
      const sl::GaussianField g(seed_of(p), sl::StreamKind::Data);
      j.b = sl::DenseMatrix(dims.d, std::max<index_t>(j.m, 1), sl::Layout::RowMajor);
      for (index_t i = 0; i < j.b.rows(); ++i)
        for (index_t c = 0; c < j.b.cols(); ++c) j.b.data()[i * j.b.cols() + c] = g(i, c);
    }
  }
  if (op == "lstsq") {
    if (!p.rhs.empty()) {
      j.rhs = load_vector(p.rhs, dims.n);
    } else {
      sl::RandomStream s(seed_of(p), {sl::StreamKind::Data, 1, 0});
      j.rhs.resize(static_cast<std::size_t>(dims.n));
      for (double& x : j.rhs) x = s.randn();
    }
    if (j.method.empty()) j.method = "precond";
  }
  if (op == "leverage") {
    if (j.method.empty()) j.method = "exact";
    j.r2 = p.r2_expr.empty() ? sl::projection_columns(std::max<index_t>(dims.n, 2), 0.5)
                             : eval_dim(p.r2_expr, dims, "--r2");
  }
  return j;
}

template <typename View>
Output execute(const Job& j, const View& a, sl::KernelStats* st) {
  constexpr bool sparse = std::is_same_v<View, sl::CsrView>;
  sl::AppOptions app;
  app.threads = j.threads;
  app.gram_algo = j.gram_algo;
  if (j.op == "sketch-gauss") {
    sl::GaussianOptions g;
    g.scale = j.cfg.scale_gaussian;
    g.threads = j.threads;
    g.stats = st;
    if constexpr (sparse) return sl::sketch_gaussian_csr(a, j.m, j.cfg.seed, g);
    else return sl::sketch_gaussian_dense(a, j.m, j.cfg.seed, g);
  }
  if (j.op == "sketch-cs") {
    sl::BuildOptions bo;
    bo.variant = j.variant;
    bo.threads = j.threads;
    bo.stats = st;
    const auto s = sl::build_countsketch(j.r, sl::detail::input_rows(a), j.cfg.seed, bo);
    return sl::multiply_sa(s, a, j.threads, st);
  }
  if (j.op == "sketch-cg") {
    sl::GsaOptions g;
    g.variant = j.variant;
    g.threads = j.threads;
    g.stats = st;
    if (j.m < 1) throw sl::InputError("sketch-cg: --m must be >= 1");
    return sl::multiply_gsa(a, j.cfg, g);
  }
  if (j.op == "gram") {
    const index_t d = sl::detail::input_cols(a);
    sl::DenseMatrix b(d, d, sl::Layout::RowMajor);
    if constexpr (sparse) sl::gram(a, 1.0, 0.0, b.span(), j.gram_algo, j.threads, st);
    else sl::gram_dense(a, 1.0, 0.0, b.span(), j.threads, st);
    return b;
  }
  if (j.op == "rownorms") {
    std::vector<double> x(static_cast<std::size_t>(sl::detail::input_rows(a)), 0.0);
    if constexpr (sparse) sl::sqn_csr(a, j.b.view(), 1.0, 0.0, x, j.threads, st);
    else sl::sqn_dense(a, j.b.view(), 1.0, 0.0, x, j.threads, st);
    return x;
  }
  if (j.op == "css") return sl::column_subset_select(a, j.cfg, app).selected;
  if (j.op == "lstsq") {
    if (j.method == "gram") return sl::lstsq_gram(a, j.rhs, j.cfg.rcond, app);
    if (j.method == "sketch") return sl::lstsq_sketch_solve(a, j.rhs, j.cfg, app);
    if (j.method == "precond") return sl::lstsq_precond(a, j.rhs, j.cfg, j.tol, j.maxit, app).x;
    throw sl::InputError("lstsq: --method must be gram, sketch or precond");
  }
  if (j.op == "leverage") {
    if (j.method == "exact") return sl::leverage_exact(a, j.cfg.rcond, app).theta;
    if (j.method == "css-exact") return sl::leverage_css_exact(a, j.cfg, app).theta;
    if (j.method == "sketched") return sl::leverage_sketched(a, j.cfg.rcond, j.cfg, j.r2, app).theta;
    if (j.method == "css-sketched") return sl::leverage_css_sketched(a, j.cfg.rcond, j.cfg, j.r2, app).theta;
    throw sl::InputError("leverage: --method must be exact, css-exact, sketched or css-sketched");
  }
  throw sl::InputError("unknown operation '" + j.op + "'");
}

Output execute(const Job& j, const Input& in, sl::KernelStats* st) {
  return std::visit([&](const auto& a) { return execute(j, a.view(), st); }, in);
}

void write_output(const std::string& path, const Output& out) {
  if (path.empty()) return;
  std::visit(
      [&](const auto& o) {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, sl::DenseMatrix>) {
          sl::write_dense(path, o.view());
        } else if constexpr (std::is_same_v<T, std::vector<double>>) {
          sl::write_dense(path, sl::DenseView{static_cast<index_t>(o.size()), 1, sl::Layout::RowMajor, o});
        } else {
          std::ofstream f(path);
          if (!f) throw sl::ResourceError("cannot write '" + path + "'");
          for (index_t c : o) f << c << '\n';
          if (!f) throw sl::ResourceError("write failed: '" + path + "'");
        }
      },
      out);
}

const char* kReportHeader = "operation,n,d,m,r,threads,round,rep,wall_ms,flops,aux_bytes";

struct ReportRow {
  std::string op;
  Dims dims;
  index_t m = 0;
  index_t r = 0;
  int threads = 0;
  int round = 0;
  int rep = 0;
  double wall_ms = 0.0;
  std::int64_t flops = 0;
  std::int64_t aux_bytes = 0;
};

// Appends to an existing report so that several runs share one file.
void append_report(const std::string& path, const std::vector<ReportRow>& rows) {
  if (path.empty()) return;
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream f(path, std::ios::app);
  if (!f) throw sl::ResourceError("cannot write report '" + path + "'");
  if (fresh) f << kReportHeader << '\n';
  for (const auto& r : rows) {
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.4f", r.wall_ms);
    f << r.op << ',' << r.dims.n << ',' << r.dims.d << ',' << r.m << ',' << r.r << ',' << r.threads << ','
      << r.round << ',' << r.rep << ',' << ms << ',' << r.flops << ',' << r.aux_bytes << '\n';
  }
  if (!f) throw sl::ResourceError("write failed: '" + path + "'");
}

template <typename Fn>
double time_ms(Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

ReportRow row_for(const Job& j, const Dims& dims, const sl::KernelStats& st, double ms, int round, int rep) {
  return {j.op, dims, j.m, j.r, sl::resolve_threads(j.threads), round, rep, ms, st.flops, st.aux_bytes};
}

int run_op(const std::string& op, const Params& p) {
  const Loaded l = load_input(p);
  const Job j = plan(op, p, l.dims);
  sl::KernelStats st;
  Output out;
  const double ms = time_ms([&] { out = execute(j, l.input, &st); });
  write_output(p.out, out);
  append_report(p.report, {row_for(j, l.dims, st, ms, 0, 0)});
  std::cout << op << ": n=" << l.dims.n << " d=" << l.dims.d << " threads=" << sl::resolve_threads(p.threads)
            << " wall_ms=" << ms << '\n';
  return 0;
}

int run_bench(const std::string& op, const Params& p) {
  if (p.rounds < 1 || p.per_round < 1) throw sl::InputError("bench: --rounds and --per-round must be >= 1");
  const Loaded l = load_input(p);
  const Job j = plan(op, p, l.dims);
  Output out;
  {
    sl::KernelStats warm;
    out = execute(j, l.input, &warm);  // warm-up, not reported
  }
  std::vector<ReportRow> rows;
  std::vector<double> times;
  for (int round = 0; round < p.rounds; ++round) {
    for (int rep = 0; rep < p.per_round; ++rep) {
      sl::KernelStats st;
      const double ms = time_ms([&] { out = execute(j, l.input, &st); });
      rows.push_back(row_for(j, l.dims, st, ms, round, rep));
      times.push_back(ms);
    }
  }
  write_output(p.out, out);
  append_report(p.report, rows);
  std::sort(times.begin(), times.end());
  const std::size_t h = times.size() / 2;
  const double median = times.size() % 2 ? times[h] : 0.5 * (times[h - 1] + times[h]);
  std::cout << "bench " << op << ": n=" << l.dims.n << " d=" << l.dims.d << " m=" << j.m << " r=" << j.r
            << " threads=" << sl::resolve_threads(p.threads) << " reps=" << times.size() << " min_ms=" << times.front()
            << " median_ms=" << median << '\n';
  return 0;
}

int run_gen(const std::string& name, const Params& p, double density) {
  if (p.out.empty()) throw sl::InputError("gen: --out is required");
  auto pr = sl::find_preset(name, p.scale);
  if (!pr) throw sl::InputError("unknown preset '" + name + "' or bad --scale");
  if (density >= 0.0) pr->density = density;
  if (pr->sparse()) {
    const auto a = sl::generate_sparse(pr->n, pr->d, pr->density, seed_of(p), p.threads);
    sl::write_matrix_market(p.out, a.view());
    std::cout << "gen " << name << ": " << pr->n << "x" << pr->d << " nnz=" << a.nnz() << " -> " << p.out << '\n';
  } else {
    const auto a = sl::generate_dense(pr->n, pr->d, seed_of(p), p.threads);
    sl::write_dense(p.out, a.view());
    std::cout << "gen " << name << ": " << pr->n << "x" << pr->d << " dense -> " << p.out << '\n';
  }
  return 0;
}

int run_balance(const Params& p) {
  const auto kind = sl::parse_tail_kind(p.bound);
  if (!kind) throw sl::InputError("--bound must be chebyshev, hoeffding-absolute or hoeffding-relative");
  const Loaded l = load_input(p);
  const index_t r = eval_dim(p.balance_r, l.dims, "--r");
  std::vector<sl::WorkloadSample> samples;
  if (const auto* csr = std::get_if<sl::CsrMatrix>(&l.input)) {
    if (p.instrumented) {
      samples = sl::instrumented_workload(csr->view(), r, p.workers, p.trials, seed_of(p), p.threads);
    } else {
      std::vector<index_t> w(static_cast<std::size_t>(l.dims.n));
      for (index_t i = 0; i < l.dims.n; ++i) w[i] = csr->view().row_nnz(i);
      samples = sl::simulate_workload(w, r, p.workers, p.trials, seed_of(p), p.threads);
    }
  } else {
    const std::vector<index_t> w(static_cast<std::size_t>(l.dims.n), l.dims.d);
    samples = sl::simulate_workload(w, r, p.workers, p.trials, seed_of(p), p.threads);
  }
  const sl::TailReport rep = sl::check_tail_bounds(samples, *kind);
  const double mu = samples.front().mean();
  std::ofstream file;
  if (!p.out.empty()) {
    file.open(p.out);
    if (!file) throw sl::ResourceError("cannot write '" + p.out + "'");
  }
  std::ostream& csv = p.out.empty() ? std::cout : file;
  csv << "trial,worker,Y,bound,violated\n";
  for (const auto& s : samples)
    for (index_t t = 0; t < s.p; ++t) {
      const auto y = s.per_worker[t];
      csv << s.trial << ',' << t << ',' << y << ',' << rep.threshold << ','
          << sl::tail_violated(static_cast<double>(y), mu, rep.threshold, *kind) << '\n';
    }
  if (!p.out.empty() && !file) throw sl::ResourceError("write failed: '" + p.out + "'");
  std::ostream& log = p.out.empty() ? std::cerr : std::cout;
  log << "balance " << sl::to_string(*kind) << ": n=" << l.dims.n << " r=" << r << " p=" << p.workers
      << " trials=" << p.trials << " mean=" << mu << " threshold=" << rep.threshold << " violations=" << rep.violations
      << "/" << rep.events << " rate=" << rep.rate << " allowed=" << rep.allowed << "+" << rep.slack
      << (rep.within_bound ? " within bound" : " EXCEEDS bound") << " simultaneous=" << rep.simultaneous_success
      << " union_bound=" << rep.union_bound << '\n';
  return 0;
}

void add_input_flags(CLI::App* c, Params& p) {
  c->add_option("--in", p.in, "input matrix (.mtx sparse, otherwise dense binary)");
  c->add_option("--preset", p.preset, "generate the input: tall-sparse | short-sparse | tall-dense | short-dense");
  c->add_option("--scale", p.scale, "divide the preset's row count by this")->check(CLI::PositiveNumber);
  c->add_option("--seed", p.seed, "master seed (default: $SKETCHLAB_SEED or 0)");
  c->add_option("--threads", p.threads, "worker count (default: $SKETCHLAB_THREADS or all cores)");
}

void add_kernel_flags(CLI::App* c, Params& p) {
  add_input_flags(c, p);
  c->add_option("--m", p.m_expr, "Gaussian rows, e.g. 64, 2d, 2k");
  c->add_option("--r", p.r_expr, "CountSketch rows, e.g. 4096, d^2, 10k-preset");
  c->add_option("--r2", p.r2_expr, "projection columns for sketched leverage scores");
  c->add_option("--k", p.k, "target dimension (0: numerical rank)");
  c->add_option("--rcond", p.rcond, "relative singular-value cutoff");
  c->add_option("--batch", p.batch, "G*S*A batch size (0: d)");
  c->add_option("--gram-algo", p.gram_algo, "serial | lowmem | rowpart");
  c->add_option("--variant", p.variant, "coo | bccs");
  c->add_flag("--unscaled,!--scaled", p.unscaled, "do not scale Gaussian sketches by 1/sqrt(m)");
  c->add_option("--method", p.method, "lstsq: gram|sketch|precond; leverage: exact|css-exact|sketched|css-sketched");
  c->add_option("--rhs", p.rhs, "lstsq right-hand side (dense binary, n values)");
  c->add_option("--b", p.bmat, "rownorms right factor (dense binary, d rows)");
  c->add_option("--tol", p.tol, "lstsq precond tolerance");
  c->add_option("--maxit", p.maxit, "lstsq precond iteration limit");
  c->add_option("--out", p.out, "write the result here");
  c->add_option("--report", p.report, "append CSV timings here");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sketchlab: randomized sketching kernels and applications"};
  app.require_subcommand(1);
  Params p;
  const std::vector<std::string> ops{"sketch-gauss", "sketch-cs", "sketch-cg", "gram", "rownorms", "css", "lstsq",
                                     "leverage"};
  const std::vector<std::pair<std::string, std::string>> descriptions{
      {"sketch-gauss", "G*A with a Gaussian m x n G"},
      {"sketch-cs", "S*A with an r x n CountSketch S"},
      {"sketch-cg", "G*S*A"},
      {"gram", "A^T*A"},
      {"rownorms", "squared row norms of A*B"},
      {"css", "column subset selection"},
      {"lstsq", "least squares min ||Ax - b||"},
      {"leverage", "row leverage scores"}};
  std::vector<CLI::App*> op_cmds;
  for (const auto& [name, desc] : descriptions) {
    auto* c = app.add_subcommand(name, desc);
    add_kernel_flags(c, p);
    op_cmds.push_back(c);
  }

  std::string bench_op;
  auto* bench = app.add_subcommand("bench", "time an operation: warm-up, then rounds x reps");
  bench->add_option("operation", bench_op, "operation to time")->required()->check(CLI::IsMember(ops));
  add_kernel_flags(bench, p);
  bench->add_option("--rounds", p.rounds, "rounds (default 3)");
  bench->add_option("--per-round", p.per_round, "repetitions per round (default 5)");

  std::string gen_name;
  double density = -1.0;
  auto* gen = app.add_subcommand("gen", "write a synthetic benchmark matrix");
  gen->add_option("preset", gen_name, "tall-sparse | short-sparse | tall-dense | short-dense")->required();
  gen->add_option("--scale", p.scale, "divide the row count by this")->check(CLI::PositiveNumber);
  gen->add_option("--density", density, "override the preset density")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", p.seed, "seed (default: $SKETCHLAB_SEED or 0)");
  gen->add_option("--threads", p.threads, "worker count");
  gen->add_option("--out", p.out, "output file (.mtx for sparse presets)")->required();

  auto* balance = app.add_subcommand("balance", "CountSketch workload balance across workers");
  add_input_flags(balance, p);
  balance->add_option("--r", p.balance_r, "CountSketch rows (default 512)");
  balance->add_option("--p", p.workers, "workers (row blocks), must divide r")->check(CLI::PositiveNumber);
  balance->add_option("--trials", p.trials, "independent sketches")->check(CLI::PositiveNumber);
  balance->add_option("--bound", p.bound, "chebyshev | hoeffding-absolute | hoeffding-relative");
  balance->add_flag("--instrumented", p.instrumented, "run the real S*A kernel instead of the counting model");
  balance->add_option("--out", p.out, "per-trial CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    for (std::size_t i = 0; i < op_cmds.size(); ++i)
      if (op_cmds[i]->parsed()) return run_op(ops[i], p);
    if (bench->parsed()) return run_bench(bench_op, p);
    if (gen->parsed()) return run_gen(gen_name, p, density);
    if (balance->parsed()) return run_balance(p);
  } catch (const sl::Error& e) {
    std::cerr << "sketchlab: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "sketchlab: " << e.what() << '\n';
    return 3;
  }
  return 1;
}
