#include "hvi/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "hvi/aa_core.hpp"
#include "hvi/bifurcation.hpp"
#include "hvi/csv.hpp"
#include "hvi/errors.hpp"
#include "hvi/parallel.hpp"
#include "hvi/resonance_manifold.hpp"
#include "hvi/vi_sim.hpp"

namespace hvi::cli {

namespace {

using csv::fmt;
using nlohmann::json;

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  double eps = 0.1;
  std::optional<double> xi_crit;
  std::string sigma;
  std::string f;
  std::string xi;
  double horizon = 500.0;
  unsigned jobs = default_jobs();
  std::string out;
  std::string lpt_out;
  std::string summary;
  int nu_samples = 256;
  double xi_max = 4.0;
  double q0 = 0.0;
  double p0 = 0.0;
  double dt_out = 0.01;
};

// Rounded to the emitted precision so JSON and CSV agree digit for digit.
json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(fmt(v));
}

double scalar(const std::string& text, const char* flag) {
  if (text.empty()) throw DomainError(std::string(flag) + " is required");
  const Range r = parse_range(text);
  if (!r.scalar()) throw DomainError(std::string(flag) + " takes a single value");
  return r.lo;
}

Range grid(const std::string& text, const char* flag) {
  if (text.empty()) throw DomainError(std::string(flag) + " is required");
  return parse_range(text);
}

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path) {
    if (path.empty()) {
      os_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw IoFailure("cannot open " + path + " for writing");
    os_ = file_.get();
  }
  std::ostream& stream() { return *os_; }
  void close() {
    os_->flush();
    if (!*os_) throw IoFailure("write failed: " + (path_.empty() ? "stdout" : path_));
  }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
};

std::string derived_path(const std::string& out, const std::string& suffix) {
  std::filesystem::path p(out);
  p.replace_extension();
  return p.string() + suffix;
}

struct Context {
  std::string command;
  std::string provenance;
  Options opt;
  std::ostream& out;
};

csv::Writer start_csv(std::ostream& os, const Context& ctx,
                      const std::vector<std::string>& columns) {
  os << "# " << ctx.provenance << '\n';
  return csv::Writer(os, columns);
}

void cmd_aa(Context& ctx) {
  const auto xs = grid(ctx.opt.xi, "--xi").values();
  Sink sink(ctx.opt.out, ctx.out);
  auto w = start_csv(sink.stream(), ctx,
                     {"xi", "phi", "J", "omega", "a1", "dJ_dxi", "da1_dxi"});
  for (double x : xs) {
    const auto q = aa::evaluate(x);
    w.row({fmt(q.xi), fmt(q.phi), fmt(q.J), fmt(q.omega), fmt(q.a1),
           fmt(q.dJ_dxi), fmt(q.da1_dxi)});
  }
  sink.close();
}

void write_lpt(csv::Writer& w, const rm::LPTContour& c) {
  for (const auto& p : c.points) w.row({fmt(p.nu), fmt(p.xi)});
}

json lpt_json(const rm::LPTContour& c) {
  return {{"max_xi", num(c.max_xi)},
          {"nu_at_max", num(c.nu_at_max)},
          {"passes_saddle", c.passes_saddle}};
}

void cmd_portrait(Context& ctx) {
  const auto& o = ctx.opt;
  const rm::ScaledForcing forcing(scalar(o.f, "--f"), scalar(o.sigma, "--sigma"),
                                  o.eps);
  const auto xs = grid(o.xi.empty() ? "0:2:201" : o.xi, "--xi").values();
  if (o.nu_samples < 2) throw DomainError("--nu-samples must be >= 2");
  auto rows = parallel_map<std::vector<std::string>>(
      static_cast<std::size_t>(o.nu_samples), o.jobs, [&](std::size_t i) {
        const double nu = 2.0 * std::numbers::pi * i / o.nu_samples;
        std::vector<std::string> cells;
        for (double x : xs) {
          cells.push_back(fmt(nu) + ',' + fmt(x) + ',' +
                          fmt(rm::manifold_value(rm::PhasePoint(nu, x), forcing)));
        }
        return cells;
      });
  Sink sink(o.out, ctx.out);
  sink.stream() << "# " << ctx.provenance << "\nnu,xi,C\n";
  for (const auto& col : rows) {
    for (const auto& line : col) sink.stream() << line << '\n';
  }
  sink.close();

  const std::string lpt_path =
      !o.lpt_out.empty() ? o.lpt_out
                         : (o.out.empty() ? "" : derived_path(o.out, "_lpt.csv"));
  if (lpt_path.empty()) return;
  const auto contour = rm::lpt_contour(forcing, std::max(16, o.nu_samples), o.xi_max);
  Sink lsink(lpt_path, ctx.out);
  auto w = start_csv(lsink.stream(), ctx, {"nu", "xi"});
  write_lpt(w, contour);
  w.comment(lpt_json(contour).dump());
  lsink.close();
}

void cmd_lpt(Context& ctx) {
  const auto& o = ctx.opt;
  const rm::ScaledForcing forcing(scalar(o.f, "--f"), scalar(o.sigma, "--sigma"),
                                  o.eps);
  const auto contour = rm::lpt_contour(forcing, o.nu_samples, o.xi_max);
  Sink sink(o.lpt_out.empty() ? o.out : o.lpt_out, ctx.out);
  auto w = start_csv(sink.stream(), ctx, {"nu", "xi"});
  write_lpt(w, contour);
  w.comment(lpt_json(contour).dump());
  sink.close();
}

void cmd_stationary(Context& ctx) {
  const auto& o = ctx.opt;
  const rm::ScaledForcing forcing(scalar(o.f, "--f"), scalar(o.sigma, "--sigma"),
                                  o.eps);
  const auto pts = rm::stationary_points(forcing, o.xi_max);
  Sink sink(o.out, ctx.out);
  auto w = start_csv(sink.stream(), ctx, {"nu0", "xi0", "kind"});
  for (const auto& p : pts) w.row({fmt(p.nu0), fmt(p.xi0), rm::to_string(p.kind)});
  sink.close();
}

void cmd_boundary(Context& ctx) {
  const auto& o = ctx.opt;
  const bif::CriticalEnergy xt(o.xi_crit.value_or(1.0));
  const auto tb = bif::transition_boundary(xt, grid(o.sigma, "--sigma").values(), o.eps);
  Sink sink(o.out, ctx.out);
  auto w = start_csv(sink.stream(), ctx, {"sigma", "f_crit", "mechanism"});
  for (const auto& s : tb.samples) {
    w.row({fmt(s.sigma), fmt(s.f_crit), bif::to_string(s.mechanism)});
  }
  if (tb.coexistence) {
    w.comment(json{{"sigma_star", num(tb.coexistence->sigma_star)},
                   {"f_star", num(tb.coexistence->f_star)}}
                  .dump());
  }
  sink.close();
}

void cmd_freqresp(Context& ctx) {
  const auto& o = ctx.opt;
  const double f = scalar(o.f, "--f");
  const Range r = grid(o.sigma, "--sigma");
  if (r.scalar()) throw DomainError("--sigma must be a range lo:hi:count");
  const auto pts = bif::frequency_response(f, o.eps, r.lo, r.hi, r.count);
  Sink sink(o.out, ctx.out);
  auto w = start_csv(sink.stream(), ctx, {"sigma", "xi", "branch", "at_jump"});
  for (const auto& p : pts) {
    w.row({fmt(p.sigma), fmt(p.xi), bif::to_string(p.branch), p.at_jump ? "1" : "0"});
  }
  sink.close();
}

void cmd_energy_map(Context& ctx) {
  const auto& o = ctx.opt;
  const auto sigmas = grid(o.sigma, "--sigma").values();
  const auto fs = grid(o.f, "--f").values();
  const auto xi = parallel_map<double>(sigmas.size() * fs.size(), o.jobs,
                                       [&](std::size_t k) {
                                         return bif::energy_map(sigmas[k / fs.size()],
                                                                fs[k % fs.size()], o.eps);
                                       });
  Sink sink(o.out, ctx.out);
  auto w = start_csv(sink.stream(), ctx, {"sigma", "f", "xi_max"});
  for (std::size_t k = 0; k < xi.size(); ++k) {
    w.row({fmt(sigmas[k / fs.size()]), fmt(fs[k % fs.size()]), fmt(xi[k])});
  }
  sink.close();
}

void cmd_simulate(Context& ctx) {
  const auto& o = ctx.opt;
  const double sigma = scalar(o.sigma, "--sigma");
  const double f = scalar(o.f, "--f");
  sim::SimConfig cfg;
  cfg.F = o.eps * f;
  cfg.Omega = 1.0 + o.eps * sigma;
  cfg.q0 = o.q0;
  cfg.p0 = o.p0;
  cfg.horizon = o.horizon;
  cfg.dt_out = o.dt_out;
  const auto traj = sim::simulate(cfg);
  const auto summary = sim::energy_summary(traj, cfg.Omega, o.xi_crit);

  json j{{"max_E_inst", num(summary.max_E_inst)},
         {"max_xi_windowed", num(summary.max_xi_windowed)},
         {"t_of_max", num(summary.t_of_max)},
         {"impacts", json::array()},
         {"crossed", summary.crossed},
         {"t_cross", summary.t_cross ? num(*summary.t_cross) : json(nullptr)}};
  for (const auto& imp : traj.impacts) j["impacts"].push_back(num(imp.tau));

  Sink sink(o.out, ctx.out);
  auto w = start_csv(sink.stream(), ctx, {"tau", "q", "p", "E"});
  for (const auto& s : traj.samples) w.row({fmt(s.tau), fmt(s.q), fmt(s.p), fmt(s.E)});
  const std::string summary_path =
      !o.summary.empty() ? o.summary : (o.out.empty() ? "" : derived_path(o.out, ".json"));
  if (summary_path.empty()) w.comment("summary " + j.dump());
  sink.close();
  if (!summary_path.empty()) {
    Sink js(summary_path, ctx.out);
    js.stream() << j.dump(2) << '\n';
    js.close();
  }
}

void cmd_sweep(Context& ctx) {
  const auto& o = ctx.opt;
  const bif::CriticalEnergy xt(o.xi_crit.value_or(1.0));
  const auto tb = bif::transition_boundary(xt, grid(o.sigma, "--sigma").values(), o.eps);
  const auto numeric = parallel_map<double>(tb.samples.size(), o.jobs, [&](std::size_t i) {
    const auto& s = tb.samples[i];
    const double step = 0.02 * std::max(s.f_crit, 0.25);
    const auto f = sim::first_crossing_amplitude(s.sigma, o.eps, xt.value(), step,
                                                 3.0 * s.f_crit + 1.0, o.horizon);
    return f.value_or(std::nan(""));
  });
  Sink sink(o.out, ctx.out);
  auto w = start_csv(sink.stream(), ctx,
                     {"sigma", "f_numeric", "f_analytic", "mechanism", "rel_err"});
  for (std::size_t i = 0; i < numeric.size(); ++i) {
    const auto& s = tb.samples[i];
    const double rel = s.f_crit > 0.0 ? (numeric[i] - s.f_crit) / s.f_crit : std::nan("");
    w.row({fmt(s.sigma), fmt(numeric[i]), fmt(s.f_crit), bif::to_string(s.mechanism),
           fmt(rel)});
  }
  sink.close();
}

std::string provenance(const CLI::App& app, const std::string& command) {
  static const std::set<std::string> skip{"--help", "--config", "--out", "--lpt-out",
                                          "--summary", "--jobs"};
  std::map<std::string, std::string> kv;
  for (const CLI::Option* opt : app.get_options()) {
    if (opt->count() == 0 && opt->results().empty()) continue;
    const std::string name = opt->get_name();
    if (skip.count(name) || name.rfind("--", 0) != 0) continue;
    std::string joined;
    for (const auto& r : opt->results()) joined += (joined.empty() ? "" : " ") + r;
    kv[name.substr(2)] = joined;
  }
  std::string out = std::string("hvi ") + command + " version=" + kVersion;
  for (const auto& [k, v] : kv) out += " " + k + "=" + v;
  return out;
}

}  // namespace

std::vector<double> Range::values() const {
  if (count == 1) return {lo};
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) v[i] = lo + (hi - lo) * i / (count - 1);
  v.back() = hi;
  return v;
}

Range parse_range(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != s.size() || !std::isfinite(v)) {
      throw std::invalid_argument("bad number '" + s + "' in '" + text + "'");
    }
    return v;
  };
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() == 1) {
    const double v = number(parts[0]);
    return {v, v, 1};
  }
  if (parts.size() != 3) throw std::invalid_argument("expected lo:hi:count, got '" + text + "'");
  Range r{number(parts[0]), number(parts[1]), 0};
  const double c = number(parts[2]);
  if (c != std::floor(c) || c < 2 || c > 1e8) {
    throw std::invalid_argument("range count must be an integer >= 2 in '" + text + "'");
  }
  r.count = static_cast<int>(c);
  if (!(r.lo < r.hi)) throw std::invalid_argument("range must have lo < hi in '" + text + "'");
  return r;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Hybrid vibro-impact oscillator: averaged analysis and simulation", "hvi"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "flat key = value file; flags override it");
  app.require_subcommand(1);

  app.add_option("--eps", opt.eps, "small parameter")->capture_default_str();
  app.add_option("--xi-crit", opt.xi_crit, "threshold energy");
  app.add_option("--sigma", opt.sigma, "detuning, value or lo:hi:count");
  app.add_option("--f", opt.f, "scaled forcing, value or lo:hi:count");
  app.add_option("--xi", opt.xi, "averaged energy, value or lo:hi:count");
  app.add_option("--horizon", opt.horizon, "simulation end time")->capture_default_str();
  app.add_option("--jobs", opt.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", opt.out, "output CSV path (default stdout)");
  app.add_option("--lpt-out", opt.lpt_out, "LPT sample CSV path");
  app.add_option("--summary", opt.summary, "simulation summary JSON path");
  app.add_option("--nu-samples", opt.nu_samples, "phase columns")->capture_default_str();
  app.add_option("--xi-max", opt.xi_max, "energy window")->capture_default_str();
  app.add_option("--q0", opt.q0, "initial displacement");
  app.add_option("--p0", opt.p0, "initial momentum");
  app.add_option("--dt-out", opt.dt_out, "output sampling step")->capture_default_str();

  const std::vector<std::pair<std::string, std::function<void(Context&)>>> commands{
      {"aa", cmd_aa},
      {"portrait", cmd_portrait},
      {"lpt", cmd_lpt},
      {"stationary", cmd_stationary},
      {"boundary", cmd_boundary},
      {"freqresp", cmd_freqresp},
      {"energy-map", cmd_energy_map},
      {"simulate", cmd_simulate},
      {"sweep", cmd_sweep},
  };
  for (const auto& [name, fn] : commands) app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kOk : kUsage;
  }

  const CLI::App* sub = app.get_subcommands().front();
  try {
    Context ctx{sub->get_name(), provenance(app, sub->get_name()), opt, out};
    for (const auto& [name, fn] : commands) {
      if (name == ctx.command) fn(ctx);
    }
    return kOk;
  } catch (const IoFailure& e) {
    err << "hvi: I/O failure: " << e.what() << '\n';
    return kIo;
  } catch (const NumericError& e) {
    err << "hvi: numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::invalid_argument& e) {
    err << "hvi: " << e.what() << '\n';
    return kUsage;
  } catch (const std::domain_error& e) {
    err << "hvi: " << e.what() << '\n';
    return kUsage;
  } catch (const NotApplicable& e) {
    err << "hvi: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace hvi::cli
