#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "secrecy/io.hpp"
#include "support.hpp"

using namespace secrecy;
using namespace testsupport;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "secrecy-io-tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path write_json(const std::string& name, const std::string& text) {
  fs::path p = scratch_dir() / name;
  std::ofstream out(p);
  out << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Expect a ParseError whose message mentions the given fragment.
template <typename Fn>
void check_parse_error(Fn&& fn, const std::string& fragment) {
  try {
    fn();
    FAIL_CHECK("expected ParseError mentioning: " << fragment);
  } catch (const ParseError& e) {
    CHECK_MESSAGE(std::string(e.what()).find(fragment) != std::string::npos,
                  "message was: " << e.what());
  }
}

}  // namespace

TEST_CASE("channel file parsing: valid inputs") {
  fs::path p = write_json("ok_matrix.json", R"({
    "H1": [[2.0, 0.4]],
    "H2": [[0.4, 1.0]],
    "S": [[3.3333, 1.2346], [1.2346, 1.6667]]
  })");
  ChannelSpec spec = parse_channel_file(p);
  CHECK(spec.t() == 2);
  CHECK(spec.power.kind() == PowerConstraint::Kind::MatrixPower);
  CHECK(spec.H1(0, 0) == doctest::Approx(2.0));
  CHECK(spec.power.S()(0, 1) == doctest::Approx(1.2346));

  fs::path q = write_json("ok_total.json", R"({
    "H1": [[1.0]], "H2": [[0.5]], "P": 4.5
  })");
  ChannelSpec tp = parse_channel_file(q);
  CHECK(tp.power.kind() == PowerConstraint::Kind::TotalPower);
  CHECK(tp.power.P() == doctest::Approx(4.5));
}

TEST_CASE("channel file parsing: each failure names the offending key") {
  check_parse_error(
      [] {
        parse_channel_file(write_json("missing_h1.json",
                                      R"({"H2": [[1.0]], "P": 1.0})"));
      },
      "\"H1\"");
  check_parse_error(
      [] {
        parse_channel_file(write_json(
            "both_sp.json",
            R"({"H1": [[1.0]], "H2": [[1.0]], "S": [[1.0]], "P": 1.0})"));
      },
      "exactly one of \"S\" or \"P\"");
  check_parse_error(
      [] {
        parse_channel_file(
            write_json("neither.json", R"({"H1": [[1.0]], "H2": [[1.0]]})"));
      },
      "exactly one of \"S\" or \"P\"");
  check_parse_error(
      [] {
        parse_channel_file(write_json(
            "bad_s.json",
            R"({"H1": [[1,0]], "H2": [[0,1]], "S": [[1,2],[2,1]]})"));
      },
      "\"S\" is not positive semidefinite");
  check_parse_error(
      [] {
        parse_channel_file(write_json(
            "ragged.json",
            R"({"H1": [[1,0],[1]], "H2": [[0,1]], "P": 1.0})"));
      },
      "\"H1\" rows have inconsistent lengths");
  check_parse_error(
      [] {
        parse_channel_file(write_json(
            "nonnum.json", R"({"H1": [["x"]], "H2": [[1.0]], "P": 1.0})"));
      },
      "\"H1\" contains a non-numeric entry");
  check_parse_error(
      [] {
        parse_channel_file(write_json(
            "negp.json", R"({"H1": [[1.0]], "H2": [[1.0]], "P": -1})"));
      },
      "\"P\" must be nonnegative");
  check_parse_error(
      [] { parse_channel_file(write_json("garbage.json", "{not json")); },
      "malformed JSON");
  CHECK_THROWS_AS(parse_channel_file(scratch_dir() / "no_such_file.json"),
                  IoError);
}

TEST_CASE("boundary CSV: format, ordering, and round trip") {
  RegionBoundary b;
  for (double g : {1.0, 0.0, 0.5}) {  // deliberately unsorted
    BoundaryPoint p;
    p.gamma0 = g;
    p.alpha = 0.25 + g;
    p.R0 = 0.5 * std::log2(1.0 + p.alpha * g);
    p.R1 = 0.5 * std::log2(1.0 + p.alpha * (1.0 - g));
    b.points.push_back(std::move(p));
  }
  fs::path csv = scratch_dir() / "boundary.csv";
  emit_boundary_csv(b, csv);

  const std::string text = slurp(csv);
  CHECK(text.find("# log_base=2\n") != std::string::npos);
  CHECK(text.find("# feasibility_dead_band=1e-07\n") != std::string::npos);
  CHECK(text.find("gamma0,alpha,R0_bits,R1_bits\n") != std::string::npos);
  CHECK(text.find('\r') == std::string::npos);

  RegionBoundary back = parse_boundary_csv(csv);
  REQUIRE(back.points.size() == 3);
  for (std::size_t i = 1; i < back.points.size(); ++i) {
    CHECK(back.points[i].gamma0 > back.points[i - 1].gamma0);
  }
  CHECK(back.points[1].gamma0 == doctest::Approx(0.5));
  CHECK(back.points[1].alpha == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(back.points[1].R1 ==
        doctest::Approx(0.5 * std::log2(1.375)).epsilon(1e-11));

  // Deterministic: emitting the same boundary twice gives identical bytes.
  fs::path csv2 = scratch_dir() / "boundary2.csv";
  emit_boundary_csv(b, csv2);
  CHECK(slurp(csv2) == text);

  CHECK_THROWS_AS(emit_boundary_csv(RegionBoundary{}, csv), DomainError);
}

TEST_CASE("boundary CSV: witnesses go to a sibling JSON file") {
  RegionBoundary b;
  BoundaryPoint p;
  p.gamma0 = 0.5;
  p.alpha = 1.0;
  p.R0 = p.R1 = 0.5 * std::log2(1.5);
  p.witness.push_back(SymMatrix::Identity(2));
  b.points.push_back(std::move(p));
  fs::path csv = scratch_dir() / "withwit.csv";
  emit_boundary_csv(b, csv);
  fs::path side = scratch_dir() / "withwit.witness.json";
  REQUIRE(fs::exists(side));
  nlohmann::json w = nlohmann::json::parse(slurp(side));
  REQUIRE(w.is_array());
  CHECK(w[0]["gamma0"] == 0.5);
  CHECK(w[0]["witness"][0][0][0] == 1.0);
}

TEST_CASE("boundary CSV parse failures") {
  CHECK_THROWS_AS(parse_boundary_csv(scratch_dir() / "missing.csv"), IoError);
  fs::path bad = write_json("bad_header.csv", "a,b,c,d\n0,0,0,0\n");
  CHECK_THROWS_AS(parse_boundary_csv(bad), ParseError);
  fs::path row = write_json(
      "bad_row.csv", "gamma0,alpha,R0_bits,R1_bits\n0.5,oops,0,0\n");
  CHECK_THROWS_AS(parse_boundary_csv(row), ParseError);
}

TEST_CASE("plot script references each CSV by stem") {
  fs::path gp = scratch_dir() / "plot.gp";
  emit_plot_script({scratch_dir() / "boundary.csv",
                    scratch_dir() / "other.csv"},
                   gp);
  const std::string text = slurp(gp);
  CHECK(text.find("set datafile separator ','") != std::string::npos);
  CHECK(text.find("using 3:4 with lines") != std::string::npos);
  CHECK(text.find("title 'boundary'") != std::string::npos);
  CHECK(text.find("title 'other'") != std::string::npos);
  CHECK_THROWS_AS(emit_plot_script({}, gp), DomainError);
}

TEST_CASE("certificate JSON round trip") {
  KKTCertificate cert(SymMatrix::Scalar(1.0), SymMatrix::Scalar(2.0),
                      SymMatrix::Scalar(3.0));
  cert.R0_target = 0.25;
  cert.B_star = SymMatrix::Scalar(1.1623);
  cert.R1_star = 0.3;
  cert.mu1 = 0.0;
  cert.mu2 = 0.4625;
  cert.M2 = SymMatrix::Scalar(0.025);
  cert.residual_stationarity = 1e-9;
  cert.residual_slackness = 1e-10;

  nlohmann::json j = certificate_to_json(cert);
  KKTCertificate back = certificate_from_json(j);
  CHECK(back.N2(0, 0) == cert.N2(0, 0));
  CHECK(back.R0_target == cert.R0_target);
  CHECK(back.B_star(0, 0) == cert.B_star(0, 0));
  CHECK(back.mu2 == cert.mu2);
  CHECK(back.M2(0, 0) == cert.M2(0, 0));
  CHECK(back.residual_stationarity == cert.residual_stationarity);

  nlohmann::json missing = j;
  missing.erase("B_star");
  CHECK_THROWS_AS(certificate_from_json(missing), ParseError);
}

TEST_CASE("chain report serialization carries verdicts and failures") {
  KKTCertificate cert(SymMatrix::Scalar(1.0), SymMatrix::Scalar(2.0),
                      SymMatrix::Scalar(3.0));
  ChainReport rep(cert);
  rep.passed = false;
  rep.failures = {"orderings"};
  rep.eei_ok = true;
  nlohmann::json j = chain_report_to_json(rep);
  CHECK(j["passed"] == false);
  CHECK(j["failures"][0] == "orderings");
  CHECK(j["eei_ok"] == true);
  CHECK(j.contains("certificate"));
  CHECK(j.contains("N1_tilde"));
}

TEST_CASE("atomic text write") {
  fs::path p = scratch_dir() / "atomic.txt";
  write_text_file(p, "hello\n");
  CHECK(slurp(p) == "hello\n");
  CHECK(!fs::exists(p.string() + ".tmp"));
  write_text_file(p, "replaced\n");
  CHECK(slurp(p) == "replaced\n");
  CHECK_THROWS_AS(
      write_text_file(scratch_dir() / "no_dir" / "x.txt", "data"), IoError);
}
