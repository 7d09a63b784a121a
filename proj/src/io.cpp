#include "secrecy/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace secrecy {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Eigen::MatrixXd parse_matrix(const json& j, const std::string& key) {
  if (!j.is_array() || j.empty()) {
    throw ParseError("\"" + key + "\" must be a nonempty array of row arrays");
  }
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  Eigen::MatrixXd m;
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = j[i];
    if (!row.is_array() || row.empty()) {
      throw ParseError("\"" + key + "\" row " + std::to_string(i) +
                       " must be a nonempty array of numbers");
    }
    if (i == 0) {
      cols = row.size();
      m.resize(static_cast<Eigen::Index>(rows),
               static_cast<Eigen::Index>(cols));
    } else if (row.size() != cols) {
      throw ParseError("\"" + key + "\" rows have inconsistent lengths");
    }
    for (std::size_t k = 0; k < cols; ++k) {
      if (!row[k].is_number()) {
        throw ParseError("\"" + key + "\" contains a non-numeric entry");
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          row[k].get<double>();
    }
  }
  return m;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_sig12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

void write_text_file(const fs::path& path, const std::string& contents) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw IoError("rename failed: " + path.string() + ": " + ec.message());
  }
}

ChannelSpec parse_channel_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("malformed JSON in " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError("top-level JSON value must be an object");
  if (!j.contains("H1")) throw ParseError("missing required key \"H1\"");
  if (!j.contains("H2")) throw ParseError("missing required key \"H2\"");
  const bool has_s = j.contains("S");
  const bool has_p = j.contains("P");
  if (has_s == has_p) {
    throw ParseError("exactly one of \"S\" or \"P\" must be present");
  }

  GeneralMatrix h1 = parse_matrix(j["H1"], "H1");
  GeneralMatrix h2 = parse_matrix(j["H2"], "H2");
  if (h1.cols() != h2.cols()) {
    throw ParseError("\"H1\" and \"H2\" must have the same column count");
  }

  try {
    if (has_s) {
      Eigen::MatrixXd s = parse_matrix(j["S"], "S");
      if (s.rows() != s.cols()) throw ParseError("\"S\" must be square");
      if (s.rows() != h1.cols()) {
        throw ParseError("\"S\" dimension must match the channel column count");
      }
      SymMatrix sym(std::move(s));
      if (!psd_check(sym)) {
        throw ParseError("\"S\" is not positive semidefinite");
      }
      return ChannelSpec(std::move(h1), std::move(h2),
                         PowerConstraint::Matrix(std::move(sym)));
    }
    if (!j["P"].is_number()) throw ParseError("\"P\" must be a number");
    const double p = j["P"].get<double>();
    if (p < 0) throw ParseError("\"P\" must be nonnegative");
    return ChannelSpec(std::move(h1), std::move(h2), PowerConstraint::Total(p));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string("channel validation failed: ") + e.what());
  }
}

void emit_boundary_csv(const RegionBoundary& b, const fs::path& path) {
  if (b.points.empty()) {
    throw DomainError("emit_boundary_csv: boundary is empty");
  }
  std::vector<const BoundaryPoint*> pts;
  pts.reserve(b.points.size());
  for (const auto& p : b.points) pts.push_back(&p);
  std::stable_sort(pts.begin(), pts.end(), [](const auto* a, const auto* c) {
    return a->gamma0 < c->gamma0;
  });

  std::ostringstream out;
  out << "# log_base=2\n";
  out << "# feasibility_dead_band=" << format_sig12(kFeasDeadBand) << "\n";
  out << "gamma0,alpha,R0_bits,R1_bits\n";
  bool any_witness = false;
  for (const auto* p : pts) {
    out << format_sig12(p->gamma0) << ',' << format_sig12(p->alpha) << ','
        << format_sig12(p->R0) << ',' << format_sig12(p->R1) << '\n';
    if (!p->witness.empty()) any_witness = true;
  }
  write_text_file(path, out.str());

  if (any_witness) {
    json w = json::array();
    for (const auto* p : pts) {
      json entry;
      entry["gamma0"] = p->gamma0;
      json mats = json::array();
      for (const auto& m : p->witness) mats.push_back(matrix_to_json(m.mat()));
      entry["witness"] = std::move(mats);
      w.push_back(std::move(entry));
    }
    fs::path side = path;
    side.replace_extension(".witness.json");
    write_text_file(side, w.dump(2) + "\n");
  }
}

RegionBoundary parse_boundary_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open CSV: " + path.string());
  RegionBoundary b;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "gamma0,alpha,R0_bits,R1_bits") {
        throw ParseError("unexpected CSV header: " + line);
      }
      header_seen = true;
      continue;
    }
    BoundaryPoint p;
    char comma;
    std::istringstream row(line);
    if (!(row >> p.gamma0 >> comma >> p.alpha >> comma >> p.R0 >> comma >>
          p.R1)) {
      throw ParseError("malformed CSV row: " + line);
    }
    b.points.push_back(std::move(p));
  }
  if (!header_seen) throw ParseError("CSV header missing in " + path.string());
  return b;
}

void emit_plot_script(const std::vector<fs::path>& csv_paths,
                      const fs::path& path) {
  if (csv_paths.empty()) {
    throw DomainError("emit_plot_script: need at least one CSV");
  }
  std::ostringstream out;
  out << "set datafile separator ','\n";
  out << "set xlabel 'R0 (bits/use)'\n";
  out << "set ylabel 'R1 (bits/use)'\n";
  out << "set key top right\n";
  out << "set grid\n";
  out << "plot";
  for (std::size_t i = 0; i < csv_paths.size(); ++i) {
    if (i) out << ",";
    out << " '" << csv_paths[i].generic_string() << "' using 3:4 with lines "
        << "title '" << csv_paths[i].stem().string() << "'";
  }
  out << "\n";
  write_text_file(path, out.str());
}

json certificate_to_json(const KKTCertificate& cert) {
  json j;
  j["N1"] = matrix_to_json(cert.N1.mat());
  j["N2"] = matrix_to_json(cert.N2.mat());
  j["S"] = matrix_to_json(cert.S.mat());
  j["R0_target_bits"] = cert.R0_target;
  j["B_star"] = matrix_to_json(cert.B_star.mat());
  j["R1_star_bits"] = cert.R1_star;
  j["mu1"] = cert.mu1;
  j["mu2"] = cert.mu2;
  j["M1"] = matrix_to_json(cert.M1.mat());
  j["M2"] = matrix_to_json(cert.M2.mat());
  j["residual_stationarity"] = cert.residual_stationarity;
  j["residual_slackness"] = cert.residual_slackness;
  return j;
}

KKTCertificate certificate_from_json(const json& j) {
  auto mat = [&](const char* key) {
    if (!j.contains(key)) {
      throw ParseError(std::string("certificate missing key \"") + key + "\"");
    }
    return SymMatrix(parse_matrix(j[key], key));
  };
  KKTCertificate cert(mat("N1"), mat("N2"), mat("S"));
  cert.R0_target = j.at("R0_target_bits").get<double>();
  cert.B_star = mat("B_star");
  cert.R1_star = j.at("R1_star_bits").get<double>();
  cert.mu1 = j.at("mu1").get<double>();
  cert.mu2 = j.at("mu2").get<double>();
  cert.M1 = mat("M1");
  cert.M2 = mat("M2");
  cert.residual_stationarity = j.at("residual_stationarity").get<double>();
  cert.residual_slackness = j.at("residual_slackness").get<double>();
  return cert;
}

json chain_report_to_json(const ChainReport& rep) {
  json j;
  j["certificate"] = certificate_to_json(rep.certificate);
  j["N1_tilde"] = matrix_to_json(rep.N1_tilde.mat());
  j["eq_substitution_residual"] = rep.eq_substitution_residual;
  j["det_identity_rel_error"] = rep.det_identity_rel_error;
  j["orderings_ok"] = rep.orderings_ok;
  j["weighted_sum_max_slack_bits"] = rep.weighted_sum_max_slack_bits;
  j["contradiction_violation_bits"] = rep.contradiction_violation_bits;
  j["eei_ok"] = rep.eei_ok;
  j["eei_max_violation"] = rep.eei_max_violation;
  j["passed"] = rep.passed;
  j["failures"] = rep.failures;
  return j;
}

}  // namespace secrecy
