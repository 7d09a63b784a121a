#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "secrecy/io.hpp"

namespace fs = std::filesystem;
using namespace secrecy;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitInfeasibleModel = 3;
constexpr int kExitSolver = 4;
constexpr int kExitIo = 5;

struct Options {
  std::string input;
  std::string out_dir;
  int gamma0_samples = 201;
  double alpha_tol = 1e-6;
  bool plot = false;
  double eps = 1e-3;
  double r0_frac = 0.5;
  int grid_n = 41;
};

TraceConfig trace_config(const Options& opt) {
  TraceConfig cfg;
  cfg.gamma0_samples = opt.gamma0_samples;
  cfg.alpha_bisect_tol = opt.alpha_tol;
  return cfg;
}

fs::path ensure_out_dir(const Options& opt) {
  fs::path dir(opt.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory: " + dir.string());
  return dir;
}

// Aligned instance from a general spec; non-square or singular channels are
// squared up and nudged to invertibility first.
AlignedChannel align_for_cli(const ChannelSpec& spec, double eps) {
  if (spec.power.kind() != PowerConstraint::Kind::MatrixPower) {
    throw DomainError(
        "this command needs a covariance constraint \"S\", not \"P\"");
  }
  ChannelSpec sq = squarify(spec);
  try {
    return reduce_rank_deficient_S(align(sq));
  } catch (const DomainError&) {
    return reduce_rank_deficient_S(align(perturb(sq, eps)));
  } catch (const SingularMatrixError&) {
    return reduce_rank_deficient_S(align(perturb(sq, eps)));
  }
}

int run_region(const Options& opt) {
  ChannelSpec spec = parse_channel_file(opt.input);
  const fs::path dir = ensure_out_dir(opt);
  RegionBoundary b = trace_boundary(spec, trace_config(opt));
  const fs::path csv = dir / "boundary.csv";
  emit_boundary_csv(b, csv);
  std::cout << "wrote " << csv.string() << " (" << b.points.size()
            << " points)\n";
  if (opt.plot) {
    const fs::path gp = dir / "plot.gp";
    emit_plot_script({csv}, gp);
    std::cout << "wrote " << gp.string() << "\n";
  }
  return 0;
}

int run_wiretap(const Options& opt) {
  ChannelSpec spec = parse_channel_file(opt.input);
  const fs::path dir = ensure_out_dir(opt);
  auto [capacity, b_star] = wiretap_capacity(spec, trace_config(opt));
  std::printf("capacity %.6f\n", capacity);
  nlohmann::json j;
  j["capacity_bits"] = capacity;
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < b_star.dim(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < b_star.dim(); ++k) row.push_back(b_star(i, k));
    rows.push_back(std::move(row));
  }
  j["B_star"] = std::move(rows);
  write_text_file(dir / "wiretap.json", j.dump(2) + "\n");
  return 0;
}

int run_enhance_verify(const Options& opt) {
  ChannelSpec spec = parse_channel_file(opt.input);
  const fs::path dir = ensure_out_dir(opt);
  AlignedChannel ch = align_for_cli(spec, opt.eps);
  if (opt.r0_frac < 0 || opt.r0_frac > 1) {
    throw DomainError("--r0-frac must be in [0,1]");
  }
  const double r0 = opt.r0_frac * common_rate_cap(ch.N1, ch.N2, ch.S);
  ChainReport rep = verify_enhancement_chain(ch, r0);
  write_text_file(dir / "certificate.json",
                  certificate_to_json(rep.certificate).dump(2) + "\n");
  write_text_file(dir / "chain_report.json",
                  chain_report_to_json(rep).dump(2) + "\n");
  if (!rep.passed) {
    std::ostringstream msg;
    msg << "enhancement chain checks failed:";
    for (const auto& f : rep.failures) msg << " [" << f << "]";
    throw SolverError(msg.str());
  }
  std::printf("enhancement chain verified: R0=%.6f R1=%.6f stationarity=%.3g\n",
              rep.certificate.R0_target, rep.certificate.R1_star,
              rep.certificate.residual_stationarity);
  return 0;
}

int run_reduce(const Options& opt) {
  ChannelSpec spec = parse_channel_file(opt.input);
  const fs::path dir = ensure_out_dir(opt);
  AlignedChannel ch = align_for_cli(spec, opt.eps);
  nlohmann::json j;
  auto put = [&](const char* key, const SymMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.dim(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index k = 0; k < m.dim(); ++k) row.push_back(m(i, k));
      rows.push_back(std::move(row));
    }
    j[key] = std::move(rows);
  };
  put("N1", ch.N1);
  put("N2", ch.N2);
  put("S", ch.S);
  write_text_file(dir / "aligned.json", j.dump(2) + "\n");
  std::cout << "wrote " << (dir / "aligned.json").string() << " (t=" << ch.t()
            << ")\n";
  return 0;
}

int run_oracle_compare(const Options& opt) {
  ChannelSpec spec = parse_channel_file(opt.input);
  const fs::path dir = ensure_out_dir(opt);
  if (spec.t() > 2) {
    throw DomainError("oracle-compare grid scan supports t <= 2 only");
  }
  if (spec.H1.rows() != 1 || spec.H2.rows() != 1) {
    throw DomainError("oracle-compare requires single-row channel matrices");
  }
  TraceConfig cfg = trace_config(opt);
  RegionDescriptor region =
      secrecy_region(spec.H1.row(0), spec.H2.row(0), spec.power);
  RegionBoundary traced = trace_region(region, cfg);

  // Grid-backed boundary at the same gamma0 samples: bisect alpha against the
  // exhaustive feasibility scan instead of the interior-point solver.
  double max_dev_bits = 0.0;
  double max_dev_gamma0 = 0.0;
  for (const auto& pt : traced.points) {
    double lo = 0.0, hi = region.alpha_upper_seed;
    auto grid_ok = [&](double alpha) {
      return brute_force_feasible(region.make_problem(alpha, pt.gamma0),
                                  opt.grid_n)
                 .status == FeasStatus::Feasible;
    };
    for (int i = 0; i < 60 && grid_ok(hi); ++i) {
      lo = hi;
      hi *= 2.0;
    }
    while (hi - lo > cfg.alpha_bisect_tol) {
      const double mid = 0.5 * (lo + hi);
      (grid_ok(mid) ? lo : hi) = mid;
    }
    const double r0g = 0.5 * std::log2(1.0 + lo * pt.gamma0);
    const double r1g = 0.5 * std::log2(1.0 + lo * (1.0 - pt.gamma0));
    const double dev = std::max(std::abs(r0g - pt.R0), std::abs(r1g - pt.R1));
    if (dev > max_dev_bits) {
      max_dev_bits = dev;
      max_dev_gamma0 = pt.gamma0;
    }
  }
  nlohmann::json j;
  j["gamma0_samples"] = opt.gamma0_samples;
  j["grid_n"] = opt.grid_n;
  j["max_deviation_bits"] = max_dev_bits;
  j["max_deviation_gamma0"] = max_dev_gamma0;
  write_text_file(dir / "oracle_compare.json", j.dump(2) + "\n");
  std::printf("max deviation %.6g bits at gamma0=%.4f\n", max_dev_bits,
              max_dev_gamma0);
  return 0;
}

int fail(const char* category, int code, const std::string& what) {
  std::cerr << "error: " << category << ": " << what << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Secrecy capacity region tracer for two-receiver Gaussian MIMO "
      "broadcast channels"};
  app.require_subcommand(1);

  Options opt;
  std::string command;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", opt.input, "Channel JSON file")->required();
    sub->add_option("--out", opt.out_dir, "Output directory")->required();
    sub->add_option("--gamma0-samples", opt.gamma0_samples,
                    "Boundary sample count");
    sub->add_option("--alpha-tol", opt.alpha_tol, "Bisection tolerance");
    sub->add_flag("--plot", opt.plot, "Emit a gnuplot script");
    sub->callback([&, sub] { command = sub->get_name(); });
    return sub;
  };
  add_common(app.add_subcommand("region", "Trace the secrecy region boundary"));
  add_common(app.add_subcommand("wiretap", "Compute the wiretap capacity"));
  CLI::App* enh = add_common(app.add_subcommand(
      "enhance-verify", "Run and machine-check the enhancement chain"));
  enh->add_option("--eps", opt.eps, "Singular-value lift for singular channels");
  enh->add_option("--r0-frac", opt.r0_frac,
                  "Common-rate target as a fraction of its cap");
  CLI::App* red = add_common(
      app.add_subcommand("reduce", "Emit the reduced aligned instance"));
  red->add_option("--eps", opt.eps, "Singular-value lift for singular channels");
  CLI::App* orc = add_common(app.add_subcommand(
      "oracle-compare", "Compare the tracer against a grid oracle"));
  orc->add_option("--grid-n", opt.grid_n, "Grid resolution per axis");

  CLI11_PARSE(app, argc, argv);

  try {
    if (opt.gamma0_samples < 2) {
      throw ParseError("--gamma0-samples must be >= 2");
    }
    if (!(opt.alpha_tol > 0)) throw ParseError("--alpha-tol must be positive");
    if (command == "region") return run_region(opt);
    if (command == "wiretap") return run_wiretap(opt);
    if (command == "enhance-verify") return run_enhance_verify(opt);
    if (command == "reduce") return run_reduce(opt);
    return run_oracle_compare(opt);
  } catch (const ParseError& e) {
    return fail("PARSE", kExitParse, e.what());
  } catch (const DimensionError& e) {
    return fail("PARSE", kExitParse, e.what());
  } catch (const DomainError& e) {
    return fail("INFEASIBLE-MODEL", kExitInfeasibleModel, e.what());
  } catch (const IoError& e) {
    return fail("IO", kExitIo, e.what());
  } catch (const Error& e) {
    return fail("SOLVER", kExitSolver, e.what());
  } catch (const std::exception& e) {
    return fail("SOLVER", kExitSolver, e.what());
  }
}
