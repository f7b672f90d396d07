#include "wproj/cli.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wproj/error.hpp"
#include "wproj/experiments.hpp"
#include "wproj/measure_io.hpp"
#include "wproj/proj1d.hpp"
#include "wproj/projnd.hpp"
#include "wproj/props.hpp"

namespace wproj::cli {

namespace {

using nlohmann::json;
using Cell = std::variant<std::string, double, long long, bool>;

std::string format_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, double>) {
          std::ostringstream s;
          s << std::setprecision(17) << v;
          return s.str();
        } else {
          return std::to_string(v);
        }
      },
      c);
}

json cell_json(const Cell& c) {
  return std::visit([](const auto& v) { return json(v); }, c);
}

// Collects rows and writes them once, with the resolved configuration on top.
class Report {
 public:
  Report(std::string command, std::vector<std::string> columns)
      : command_(std::move(command)), columns_(std::move(columns)) {}

  void add(std::vector<Cell> row) { rows_.push_back(std::move(row)); }

  void write(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& config, bool timestamp,
             const std::string& format) const {
    std::string stamp;
    if (timestamp) {
      const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
      std::tm utc{};
      gmtime_r(&now, &utc);
      std::ostringstream s;
      s << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
      stamp = s.str();
    }
    if (format == "json") {
      json doc;
      doc["command"] = command_;
      if (timestamp) doc["timestamp"] = stamp;
      json cfg = json::object();
      for (const auto& [k, v] : config) cfg[k] = v;
      doc["config"] = cfg;
      json rows = json::array();
      for (const auto& row : rows_) {
        json r = json::object();
        for (std::size_t c = 0; c < columns_.size(); ++c) r[columns_[c]] = cell_json(row[c]);
        rows.push_back(std::move(r));
      }
      doc["rows"] = std::move(rows);
      out << doc.dump(2) << '\n';
      return;
    }
    out << "# wproj " << command_ << '\n';
    if (timestamp) out << "# timestamp=" << stamp << '\n';
    for (const auto& [k, v] : config) out << "# " << k << '=' << v << '\n';
    for (std::size_t c = 0; c < columns_.size(); ++c) out << (c ? "," : "") << columns_[c];
    out << '\n';
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_cell(row[c]);
      out << '\n';
    }
  }

 private:
  std::string command_;
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

// key=value pairs of every option of the app and the chosen subcommand.
std::vector<std::pair<std::string, std::string>> resolved_config(const CLI::App& app, const CLI::App& sub) {
  std::vector<std::pair<std::string, std::string>> out;
  auto collect = [&](const CLI::App& a, const std::string& prefix) {
    for (const CLI::Option* opt : a.get_options()) {
      if (opt->get_lnames().empty()) continue;
      const std::string name = opt->get_lnames().front();
      if (name == "help" || name == "config" || name == "report" || name == "no-timestamp") continue;
      std::string value;
      if (opt->count() > 0) {
        for (const auto& r : opt->results()) value += (value.empty() ? "" : ";") + r;
      } else {
        value = opt->get_default_str();
      }
      out.emplace_back(prefix + name, value);
    }
  };
  collect(app, "");
  collect(sub, sub.get_name() + ".");
  return out;
}

template <class Job, class Result>
std::vector<Result> fan_out(const std::vector<Job>& jobs, int threads, const std::function<Result(const Job&)>& fn) {
  std::vector<Result> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  const auto count = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const auto i = static_cast<std::size_t>(k);
    try {
      results[i] = fn(jobs[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

GridSpec parse_grid(const std::vector<std::string>& axes) {
  GridSpec grid;
  for (const auto& axis : axes) {
    std::stringstream s(axis);
    std::string a;
    std::string b;
    std::string n;
    if (!std::getline(s, a, ',') || !std::getline(s, b, ',') || !std::getline(s, n)) {
      throw Error(ErrorCode::ParseError, "grid axis must be 'x0,x1,n', got '" + axis + "'");
    }
    try {
      const double lo = std::stod(a);
      const double hi = std::stod(b);
      const auto cells = static_cast<std::size_t>(std::stoull(n));
      if (!(hi > lo) || cells == 0) throw Error(ErrorCode::ParseError, "grid axis needs x0 < x1 and n > 0");
      grid.origin.push_back(lo);
      grid.spacing.push_back((hi - lo) / static_cast<double>(cells));
      grid.shape.push_back(cells);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::ParseError, "grid axis must be 'x0,x1,n', got '" + axis + "'");
    }
  }
  return grid;
}

double default_spacing(int d) {
  if (d <= 2) return 0.04;
  if (d == 3) return 0.1;
  return 0.25;
}

DiscreteMeasure require_discrete(const AnyMeasure& m, const std::string& what) {
  if (const auto* d = std::get_if<DiscreteMeasure>(&m)) return *d;
  if (const auto* g = std::get_if<GridMeasure>(&m)) return g->to_discrete();
  throw Error(ErrorCode::InvalidSpec, what + " must be a discrete or grid measure");
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ParseError:
    case ErrorCode::InvalidSpec:
      return 2;
    default:
      return 3;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Projections onto density-constrained measures and optimal transport checks", "wproj"};
  app.option_defaults()->always_capture_default();
  app.set_config("--config", "", "Read options from a key=value file");
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 1;
  int jobs = 1;
  bool no_timestamp = false;
  std::string report_path;
  std::string format = "csv";
  app.add_option("--seed", seed, "Base random seed")->envname("WPROJ_SEED");
  app.add_option("--jobs", jobs, "Parallel jobs for verify/counterexample/threshold")->check(CLI::PositiveNumber);
  app.add_flag("--no-timestamp", no_timestamp, "Omit the timestamp header line");
  app.add_option("--report", report_path, "Write the report here instead of stdout");
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}));

  // project1d
  auto* p1 = app.add_subcommand("project1d", "Exact 1-D projection of a measure");
  std::string p1_input;
  std::string p1_out;
  double p1_p = 2.0;
  double p1_lambda = 1.0;
  std::size_t p1_n = 4096;
  double p1_spacing = 0.0;
  p1->add_option("--input", p1_input, "Measure JSON")->required();
  p1->add_option("--out", p1_out, "Projected grid measure JSON (stdout if absent)");
  p1->add_option("--p", p1_p, "Cost exponent, > 1");
  p1->add_option("--lambda", p1_lambda, "Density cap");
  p1->add_option("--n", p1_n, "Quantile cells");
  p1->add_option("--spacing", p1_spacing, "Output cell width (0: 1 / (lambda n))");

  // projectnd
  auto* pn = app.add_subcommand("projectnd", "Grid projection by capacitated transport");
  std::string pn_input;
  std::string pn_out;
  std::string pn_plan;
  double pn_p = 2.0;
  double pn_lambda = 1.0;
  double pn_spacing = 0.0;
  std::vector<std::string> pn_grid;
  pn->add_option("--input", pn_input, "Measure JSON")->required();
  pn->add_option("--out", pn_out, "Projected grid measure JSON");
  pn->add_option("--plan", pn_plan, "Plan JSON");
  pn->add_option("--p", pn_p, "Cost exponent, > 1");
  pn->add_option("--lambda", pn_lambda, "Density cap");
  pn->add_option("--grid", pn_grid, "One 'x0,x1,n' per axis");
  pn->add_option("--spacing", pn_spacing, "Automatic aligned grid spacing when --grid is absent (0: by dim)");

  // wp
  auto* wp = app.add_subcommand("wp", "Wasserstein distance between two measure files");
  std::string wp_a;
  std::string wp_b;
  double wp_p = 2.0;
  std::size_t wp_n = 2000;
  wp->add_option("--a", wp_a, "First measure JSON")->required();
  wp->add_option("--b", wp_b, "Second measure JSON")->required();
  wp->add_option("--p", wp_p, "Cost exponent, >= 1");
  wp->add_option("--n", wp_n, "Samples drawn from ball unions");

  // verify
  auto* vf = app.add_subcommand("verify", "Property checks on random instances");
  int vf_d = 1;
  double vf_p = 2.0;
  std::size_t vf_seeds = 10;
  double vf_spacing = 0.0;
  std::size_t vf_n = 4096;
  double vf_lambda = 1.0;
  vf->add_option("--d", vf_d, "Dimension")->check(CLI::Range(1, 4));
  vf->add_option("--p", vf_p, "Cost exponent, > 1");
  vf->add_option("--seeds", vf_seeds, "Number of instances, seeds seed..seed+seeds-1");
  vf->add_option("--spacing", vf_spacing, "Grid spacing for d >= 2 (0: by dim)");
  vf->add_option("--n", vf_n, "Quantile cells for d = 1");
  vf->add_option("--lambda", vf_lambda, "Density cap");

  // counterexample
  auto* cx = app.add_subcommand("counterexample", "Gap curves of the two-Dirac construction");
  std::vector<int> cx_d{2};
  std::vector<double> cx_p;
  std::size_t cx_n = 2000;
  std::size_t cx_seeds = 1;
  std::string cx_mode = "meridian";
  double cx_spacing = 0.02;
  cx->add_option("--d", cx_d, "Dimensions")->check(CLI::Range(2, 16));
  cx->add_option("--p", cx_p, "Exponents (default 1.00:2.00 step 0.05)");
  cx->add_option("--n", cx_n, "Points per measure");
  cx->add_option("--seeds", cx_seeds, "Seeds per dimension");
  cx->add_option("--mode", cx_mode, "meridian | sample | grid")->check(CLI::IsMember({"meridian", "sample", "grid"}));
  cx->add_option("--spacing", cx_spacing, "Grid mode spacing");

  // threshold
  auto* th = app.add_subcommand("threshold", "Bisection for the sign change of the gap in p");
  std::vector<int> th_d{2};
  double th_tol = 0.002;
  std::size_t th_n = 2000;
  std::size_t th_seeds = 10;
  std::string th_mode = "meridian";
  double th_spacing = 0.02;
  th->add_option("--d", th_d, "Dimensions")->check(CLI::Range(2, 16));
  th->add_option("--tol-p", th_tol, "Bisection width");
  th->add_option("--n", th_n, "Points per measure");
  th->add_option("--seeds", th_seeds, "Seeds per dimension");
  th->add_option("--mode", th_mode, "meridian | sample | grid")->check(CLI::IsMember({"meridian", "sample", "grid"}));
  th->add_option("--spacing", th_spacing, "Grid mode spacing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  const auto config = resolved_config(app, *chosen);
  std::ofstream report_file;
  if (!report_path.empty()) {
    report_file.open(report_path);
    if (!report_file) {
      err << "error: cannot write " << report_path << '\n';
      return 2;
    }
  }
  std::ostream& report_out = report_path.empty() ? out : report_file;
  auto emit = [&](const Report& r) { r.write(report_out, config, !no_timestamp, format); };

  try {
    if (chosen == p1) {
      const auto mu = require_discrete(read_measure(p1_input), "--input");
      ProjectionSpec1D spec;
      spec.p = CostExponent(p1_p);
      spec.lambda = p1_lambda;
      spec.n = p1_n;
      spec.grid_spacing = p1_spacing;
      spec.validate();
      const auto q = project_quantile_of(mu, spec);
      const auto projected = project_measure_1d(mu, spec);
      if (p1_out.empty()) {
        out << to_json(projected).dump() << '\n';
        return 0;
      }
      write_measure(p1_out, projected);
      Report r("project1d", {"distance", "mean_in", "mean_out", "cells", "max_density"});
      r.add({std::pow(quantile_distance_pow(q, QuantileFn::of(mu), spec.p.p), 1.0 / spec.p.p), barycenter(mu)[0],
             q.mean(), static_cast<long long>(projected.cell_mass().size()), projected.max_density()});
      emit(r);
      return 0;
    }

    if (chosen == pn) {
      const auto mu = require_discrete(read_measure(pn_input), "--input");
      GridSpec grid;
      if (pn_grid.empty()) {
        const double h = pn_spacing > 0.0 ? pn_spacing : default_spacing(mu.dim());
        grid = aligned_grid({&mu}, pn_lambda, h);
      } else {
        grid = parse_grid(pn_grid);
        if (grid.dim() != mu.dim()) throw Error(ErrorCode::InvalidSpec, "--grid needs one axis per dimension");
      }
      CapacitatedInstance inst{mu, grid, pn_lambda, CostExponent(pn_p)};
      const auto result = project_capacitated(inst);
      if (!pn_out.empty()) write_measure(pn_out, result.measure);
      if (!pn_plan.empty()) {
        json plan = plan_to_json(result.plan);
        plan["target"] = to_json(result.plan.target);
        write_json_file(pn_plan, plan);
      }
      if (pn_out.empty() && pn_plan.empty()) {
        out << to_json(result.measure).dump() << '\n';
        return 0;
      }
      Report r("projectnd", {"cost", "distance", "center_cost", "cells", "touches_boundary"});
      r.add({result.cost, std::pow(result.cost, 1.0 / pn_p), result.center_cost,
             static_cast<long long>(grid.cell_count()), result.touches_boundary});
      emit(r);
      if (result.touches_boundary) err << "warning: projection reaches the grid boundary; enlarge the grid\n";
      return 0;
    }

    if (chosen == wp) {
      const auto a = read_measure(wp_a);
      const auto b = read_measure(wp_b);
      const auto da = as_discrete(a, wp_n, seed);
      const auto db = as_discrete(b, wp_n, seed + 1);
      const CostExponent p(wp_p);
      double value = 0.0;
      std::string method;
      if (da.dim() == 1 && db.dim() == 1) {
        value = wasserstein_1d(da, db, p);
        method = "quantile";
      } else {
        value = wasserstein(da, db, p);
        method = "network_simplex";
      }
      Report r("wp", {"p", "wp", "method", "atoms_a", "atoms_b"});
      r.add({wp_p, value, method, static_cast<long long>(da.size()), static_cast<long long>(db.size())});
      emit(r);
      return 0;
    }

    if (chosen == vf) {
      CheckGrid grid;
      grid.spacing = vf_spacing > 0.0 ? vf_spacing : default_spacing(vf_d);
      grid.quantile_samples = vf_n;
      grid.lambda = vf_lambda;
      const CostExponent p(vf_p);
      if (!(vf_p > 1.0)) throw Error(ErrorCode::InvalidSpec, "verify needs p > 1");
      std::vector<std::uint64_t> seeds;
      for (std::size_t k = 0; k < vf_seeds; ++k) seeds.push_back(seed + k);
      const auto results = fan_out<std::uint64_t, std::vector<SuiteRow>>(
          seeds, jobs, [&](const std::uint64_t& s) { return verify_instance(vf_d, p, s, grid); });
      Report r("verify", {"name", "d", "p", "lhs", "rhs", "slack", "tolerance", "pass", "seed", "enforced"});
      bool ok = true;
      for (const auto& rows : results) {
        for (const auto& row : rows) {
          r.add({row.report.name, static_cast<long long>(row.d), row.p, row.report.lhs, row.report.rhs,
                 row.report.slack, row.report.tolerance, row.report.pass, static_cast<long long>(row.seed),
                 row.enforced});
          if (row.enforced && !row.report.pass) ok = false;
        }
      }
      emit(r);
      return ok ? 0 : 1;
    }

    if (chosen == cx) {
      Discretization disc;
      disc.mode = parse_gap_mode(cx_mode);
      disc.n = cx_n;
      disc.spacing = cx_spacing;
      std::vector<double> ps = cx_p;
      if (ps.empty()) {
        for (int k = 0; k <= 20; ++k) ps.push_back(1.0 + 0.05 * k);
      }
      std::vector<std::pair<int, std::uint64_t>> work;
      for (int d : cx_d) {
        for (std::size_t k = 0; k < cx_seeds; ++k) work.emplace_back(d, seed + k);
      }
      const auto results = fan_out<std::pair<int, std::uint64_t>, std::vector<GapRecord>>(
          work, jobs, [&](const auto& job) { return gap_curve(job.first, ps, disc, job.second); });
      Report r("counterexample", {"d", "p", "n", "seed", "mode", "wp_mu_nu", "wp_rho_sigma", "gap"});
      for (const auto& records : results) {
        for (const auto& g : records) {
          r.add({static_cast<long long>(g.d), g.p, static_cast<long long>(disc.n), static_cast<long long>(g.seed),
                 to_string(disc.mode), g.wp_mu_nu, g.wp_rho_sigma, g.gap});
        }
      }
      emit(r);
      return 0;
    }

    if (chosen == th) {
      Discretization disc;
      disc.mode = parse_gap_mode(th_mode);
      disc.n = th_n;
      disc.spacing = th_spacing;
      std::vector<std::pair<int, std::uint64_t>> work;
      for (int d : th_d) {
        for (std::size_t k = 0; k < th_seeds; ++k) work.emplace_back(d, seed + k);
      }
      const auto results = fan_out<std::pair<int, std::uint64_t>, ThresholdResult>(
          work, jobs, [&](const auto& job) { return find_p_threshold(job.first, th_tol, disc, job.second); });
      Report r("threshold", {"d", "p_hat", "p_hat_sd", "tol_p", "n", "seeds", "mode"});
      for (std::size_t k = 0; k < th_d.size(); ++k) {
        double sum = 0.0;
        double sq = 0.0;
        for (std::size_t s = 0; s < th_seeds; ++s) {
          const double v = results[k * th_seeds + s].p_hat;
          sum += v;
          sq += v * v;
        }
        const double m = static_cast<double>(th_seeds);
        const double mean = sum / m;
        const double sd = th_seeds > 1 ? std::sqrt(std::max(0.0, (sq - m * mean * mean) / (m - 1.0))) : 0.0;
        r.add({static_cast<long long>(th_d[k]), mean, sd, th_tol, static_cast<long long>(disc.n),
               static_cast<long long>(th_seeds), to_string(disc.mode)});
      }
      emit(r);
      return 0;
    }
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}

}  // namespace wproj::cli
