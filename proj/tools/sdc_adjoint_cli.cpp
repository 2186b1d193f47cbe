// sdc-adjoint: single runs, parameter sweeps and the adaptive loop, as CSV.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "sdc_adjoint.h"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitStepLimit = 3;
constexpr int kExitSolver = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] void raise(sdca_status status) {
  const std::string msg = sdca_last_error();
  if (status == SDCA_INVALID_ARGUMENT) throw UsageError(msg);
  throw SolverError(msg);
}

struct Options {
  std::string problem = "harmonic";
  std::optional<std::string> dt;
  std::optional<std::string> N;
  std::string M = "3";
  std::string K = "2";
  std::string mode = "explicit";
  std::string q = "auto";
  std::optional<double> tol;
  std::optional<double> T;
  std::string qoi;
  std::string config;
  std::string out;
  int jobs = 1;
  int max_steps = 25;
  std::string vary;
  bool no_timing = false;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

template <class T>
T parse_number(const std::string& text, const char* flag) {
  std::istringstream in(trim(text));
  T value{};
  if (!(in >> value) || !in.eof()) {
    throw UsageError(std::string("--") + flag + ": cannot parse '" + text + "'");
  }
  return value;
}

/// "a..b" (inclusive, integers only) or a comma list.
template <class T>
std::vector<T> parse_axis(const std::string& text, const char* flag) {
  std::vector<T> values;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    if constexpr (std::is_integral_v<T>) {
      const T lo = parse_number<T>(text.substr(0, dots), flag);
      const T hi = parse_number<T>(text.substr(dots + 2), flag);
      for (T v = lo; v <= hi; ++v) values.push_back(v);
    } else {
      throw UsageError(std::string("--") + flag + ": ranges need integer values, use a list");
    }
  } else {
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) values.push_back(parse_number<T>(item, flag));
  }
  if (values.empty()) throw UsageError(std::string("--") + flag + ": empty range");
  return values;
}

template <class T>
T parse_single(const std::string& text, const char* flag) {
  const auto v = parse_axis<T>(text, flag);
  if (v.size() != 1) throw UsageError(std::string("--") + flag + " takes one value here");
  return v.front();
}

int parse_degree(const std::string& text) {
  if (trim(text) == "auto") return 0;
  const int q = parse_single<int>(text, "q");
  if (q < 1) throw UsageError("--q must be positive or 'auto'");
  return q;
}

int intervals_for(double dt, double T) {
  if (!(dt > 0.0)) throw UsageError("--dt must be positive");
  const double n = std::round(T / dt);
  if (n < 1 || std::abs(n * dt - T) > 1e-9 * T) {
    throw UsageError("--dt must divide the final time evenly");
  }
  return static_cast<int>(n);
}

struct ProblemHandle {
  sdca_problem* ptr = nullptr;
  ~ProblemHandle() { sdca_problem_free(ptr); }
};

void load_problem(const Options& o, ProblemHandle& h) {
  const double T = o.T.value_or(0.0);
  if (o.T && !(*o.T > 0.0)) throw UsageError("--T must be positive");
  sdca_status s;
  if (!o.config.empty()) {
    s = sdca_problem_from_config(o.config.c_str(), T, &h.ptr);
  } else {
    if (!sdca_builtin_qois(o.problem.c_str())) {
      throw UsageError("unknown problem '" + o.problem + "' (harmonic, vinograd, two_body, heat)");
    }
    s = sdca_problem_builtin(o.problem.c_str(), o.qoi.empty() ? nullptr : o.qoi.c_str(), T,
                             &h.ptr);
  }
  if (s != SDCA_OK) raise(s);
}

sdca_params base_params(const Options& o) {
  sdca_params p;
  sdca_params_init(&p);
  if (o.mode == "explicit") {
    p.mode = SDCA_EXPLICIT;
  } else if (o.mode == "implicit") {
    p.mode = SDCA_IMPLICIT;
  } else {
    throw UsageError("--mode must be explicit or implicit");
  }
  return p;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

struct Row {
  std::string param;
  sdca_report report{};
  double ms = 0.0;
  sdca_status status = SDCA_OK;
  std::string error;
};

std::string format_row(const Row& r, bool timing) {
  const auto& rep = r.report;
  std::string line = r.param;
  line += ',' + sci(rep.estimate);
  line += ',' + (rep.has_effectivity ? sci(rep.effectivity) : std::string());
  line += ',' + sci(rep.E_D);
  line += ',' + sci(rep.E_M);
  line += ',' + sci(rep.E_K);
  line += ',' + (rep.has_exact ? sci(rep.exact_error) : std::string());
  line += ',' + std::to_string(rep.q);
  line += ',' + sci(timing ? r.ms : 0.0);
  return line;
}

constexpr const char* kRunHeader =
    "param,est_err,effectivity,E_D,E_M,E_K,exact_err,q_used,wallclock_ms";

void execute(const sdca_problem* problem, const sdca_params& p, Row& row) {
  const auto start = std::chrono::steady_clock::now();
  row.status = sdca_run(problem, &p, &row.report);
  row.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
               .count();
  if (row.status != SDCA_OK) row.error = sdca_last_error();
}

void run_all(const sdca_problem* problem, const std::vector<sdca_params>& params,
             std::vector<Row>& rows, int jobs) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < params.size(); i = next++) execute(problem, params[i], rows[i]);
  };
  const auto n = static_cast<std::size_t>(std::max(1, jobs));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < std::min(n, params.size()); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

int emit_rows(std::ostream& out, const std::vector<Row>& rows, bool timing) {
  out << kRunHeader << '\n';
  for (const Row& r : rows) {
    if (r.status != SDCA_OK) {
      out.flush();
      if (r.status == SDCA_INVALID_ARGUMENT) throw UsageError(r.error);
      throw SolverError(r.error);
    }
    out << format_row(r, timing) << '\n';
  }
  return 0;
}

int cmd_run(const Options& o, const sdca_problem* problem, std::ostream& out) {
  sdca_params p = base_params(o);
  const double T = sdca_problem_final_time(problem);
  if (o.dt) p.N = intervals_for(parse_single<double>(*o.dt, "dt"), T);
  if (o.N) p.N = parse_single<int>(*o.N, "N");
  p.M = parse_single<int>(o.M, "M");
  p.K = parse_single<int>(o.K, "K");
  p.degree = parse_degree(o.q);
  std::vector<Row> rows(1);
  rows[0].param = sci(T / p.N);
  run_all(problem, {p}, rows, 1);
  return emit_rows(out, rows, !o.no_timing);
}

int cmd_sweep(const Options& o, const sdca_problem* problem, std::ostream& out) {
  const sdca_params base = base_params(o);
  const double T = sdca_problem_final_time(problem);
  std::vector<sdca_params> params;
  std::vector<Row> rows;

  auto fixed = [&](sdca_params p, bool vary_n, bool vary_m, bool vary_k, bool vary_q) {
    if (!vary_n) {
      if (o.dt) p.N = intervals_for(parse_single<double>(*o.dt, "dt"), T);
      if (o.N) p.N = parse_single<int>(*o.N, "N");
      if (!o.dt && !o.N) throw UsageError("one of --dt or --N is required");
    }
    if (!vary_m) p.M = parse_single<int>(o.M, "M");
    if (!vary_k) p.K = parse_single<int>(o.K, "K");
    if (!vary_q) p.degree = parse_degree(o.q);
    return p;
  };

  if (o.vary == "dt") {
    const sdca_params p0 = fixed(base, true, false, false, false);
    std::vector<int> ns;
    if (o.dt) {
      for (double dt : parse_axis<double>(*o.dt, "dt")) ns.push_back(intervals_for(dt, T));
    } else if (o.N) {
      ns = parse_axis<int>(*o.N, "N");
    } else {
      throw UsageError("--vary dt needs --dt or --N values");
    }
    for (int n : ns) {
      sdca_params p = p0;
      p.N = n;
      params.push_back(p);
      rows.emplace_back().param = sci(T / n);
    }
  } else if (o.vary == "M" || o.vary == "K" || o.vary == "q") {
    const bool m = o.vary == "M", k = o.vary == "K", q = o.vary == "q";
    const sdca_params p0 = fixed(base, false, m, k, q);
    const std::string& text = m ? o.M : k ? o.K : o.q;
    for (int v : parse_axis<int>(text, o.vary.c_str())) {
      sdca_params p = p0;
      (m ? p.M : k ? p.K : p.degree) = v;
      if (q && v < 1) throw UsageError("--q values must be positive");
      params.push_back(p);
      rows.emplace_back().param = std::to_string(v);
    }
  } else {
    throw UsageError("--vary must be one of dt, M, K, q");
  }
  run_all(problem, params, rows, o.jobs);
  return emit_rows(out, rows, !o.no_timing);
}

int cmd_adapt(const Options& o, const sdca_problem* problem, std::ostream& out) {
  if (!o.tol) throw UsageError("adapt needs --tol");
  sdca_params p = base_params(o);
  const double T = sdca_problem_final_time(problem);
  if (o.dt) p.N = intervals_for(parse_single<double>(*o.dt, "dt"), T);
  if (o.N) p.N = parse_single<int>(*o.N, "N");
  p.M = parse_single<int>(o.M, "M");
  p.K = parse_single<int>(o.K, "K");
  p.degree = parse_degree(o.q);
  p.compute_exact = 0;

  sdca_trace* trace = nullptr;
  if (const sdca_status s = sdca_adapt(problem, &p, *o.tol, o.max_steps, &trace); s != SDCA_OK) {
    raise(s);
  }
  std::unique_ptr<sdca_trace, decltype(&sdca_trace_free)> guard(trace, sdca_trace_free);
  out << "step,est_err,dt,M,K,E_D,E_M,E_K,action\n";
  for (std::size_t i = 0; i < sdca_trace_size(trace); ++i) {
    sdca_adapt_row r;
    sdca_trace_row(trace, i, &r);
    out << i + 1 << ',' << sci(r.estimate) << ',' << sci(r.dt) << ',' << r.M << ',' << r.K << ','
        << sci(r.E_D) << ',' << sci(r.E_M) << ',' << sci(r.E_K) << ','
        << sdca_action_name(r.action) << '\n';
  }
  return sdca_trace_incomplete(trace) ? kExitStepLimit : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SDC solves with adjoint-based QoI error estimates"};
  app.require_subcommand(1, 1);
  Options o;

  auto* run = app.add_subcommand("run", "one estimate, one CSV row");
  auto* sweep = app.add_subcommand("sweep", "one row per value of the --vary axis");
  auto* adapt = app.add_subcommand("adapt", "refine until |estimate| <= --tol");

  for (auto* sub : {run, sweep, adapt}) {
    sub->add_option("--problem", o.problem, "harmonic | vinograd | two_body | heat");
    auto* dt = sub->add_option("--dt", o.dt, "outer step; sweep: comma list");
    auto* n = sub->add_option("--N", o.N, "outer intervals; sweep: a..b or list");
    dt->excludes(n);
    sub->add_option("--M", o.M, "subintervals per interval");
    sub->add_option("--K", o.K, "SDC sweeps");
    sub->add_option("--mode", o.mode, "explicit | implicit");
    sub->add_option("--q", o.q, "reconstruction degree or 'auto'");
    sub->add_option("--tol", o.tol, "adapt tolerance");
    sub->add_option("--T", o.T, "final time override");
    sub->add_option("--qoi", o.qoi, "registered QoI name");
    sub->add_option("--config", o.config, "linear problem config file");
    sub->add_option("--out", o.out, "CSV destination (default stdout)");
    sub->add_option("--jobs", o.jobs, "parallel sweep rows")->check(CLI::PositiveNumber);
    sub->add_flag("--no-timing", o.no_timing, "write 0 in wallclock_ms");
  }
  sweep->add_option("--vary", o.vary, "dt | M | K | q")->required();
  adapt->add_option("--max-steps", o.max_steps, "estimate budget")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    ProblemHandle problem;
    load_problem(o, problem);

    std::ofstream file;
    if (!o.out.empty()) {
      file.open(o.out);
      if (!file) throw UsageError("cannot open '" + o.out + "' for writing");
    }
    std::ostream& out = o.out.empty() ? std::cout : file;

    if (run->parsed()) return cmd_run(o, problem.ptr, out);
    if (sweep->parsed()) return cmd_sweep(o, problem.ptr, out);
    return cmd_adapt(o, problem.ptr, out);
  } catch (const UsageError& e) {
    std::cerr << "sdc-adjoint: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const SolverError& e) {
    std::cerr << "sdc-adjoint: " << e.what() << '\n';
    return kExitSolver;
  }
}
