#include "mapcones/cli.hpp"
#include "mapcones/io.hpp"
#include "mapcones/sampling.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace mapcones;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& content)
      : path("/tmp/mapcones_test_" + name) {
    std::ofstream f(path);
    f << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

int run_cli(const std::vector<std::string>& args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  if (out_text) *out_text = out.str();
  return code;
}

}  // namespace

TEST_CASE("JSON round trips are bit-identical") {
  Rng rng(3);
  SECTION("bipartite matrix") {
    BipartiteMatrix x(2, 3, random_hermitian(6, rng));
    auto j = to_json(x);
    BipartiteMatrix y = bipartite_from_json(json::parse(j.dump()));
    CHECK(y.dimA() == 2);
    CHECK((x.mat() - y.mat()).norm() == 0.0);
  }
  SECTION("map") {
    HPMap m = from_choi(3, 2, random_hermitian(6, rng));
    HPMap back = hpmap_from_json(json::parse(to_json(m).dump()));
    CHECK(back.dimA() == 3);
    CHECK((back.choi().mat() - m.choi().mat()).norm() == 0.0);
  }
  SECTION("cone") {
    AugmentedCone k = example_cone();
    AugmentedCone back = cone_from_json(json::parse(to_json(k).dump()));
    CHECK(back.include_sp1);
    REQUIRE(back.generators.size() == 1);
    CHECK((back.generators[0].choi().mat() - sigma_map().choi().mat()).norm() == 0.0);
  }
}

TEST_CASE("verdict serialization carries status, gap and certificate") {
  SolverOptions opts;
  auto v = is_ppt_map(tau_map(), opts);
  json j = to_json(v);
  CHECK(j["status"] == "non-member");
  CHECK(j["gap"].get<double>() < 0);
  CHECK(j["certificate"]["kind"] == "eigenvector");
}

TEST_CASE("builtin name resolution") {
  CHECK(resolve_map("sigma").choi().mat()(2, 2) == cxd(1, 0));
  CHECK(resolve_map("tau").dimA() == 2);
  CHECK(resolve_map("identity:3").dimA() == 3);
  CHECK(resolve_map("transpose").choi().mat()(1, 2) == cxd(1, 0));
  HPMap f = resolve_map("phi_abcd:1,1,1,0.5");
  CHECK(f.choi().mat()(3, 3) == cxd(0.5, 0));
  CHECK(resolve_map("phi_alpha:2").choi().mat()(0, 0) == cxd(2, 0));
  CHECK_THROWS_AS(resolve_map("phi_abcd:1,2"), ParseError);
  CHECK_THROWS_AS(resolve_map("nonexistent-builtin"), ParseError);
  CHECK(resolve_cone("example-K").kind == ConeSpec::Kind::Augmented);
  CHECK(resolve_cone("p:2").id.name() == "P2");
}

TEST_CASE("cli membership exit codes") {
  CHECK(run_cli({"member", "--cone", "ppt", "tau"}) == 1);
  CHECK(run_cli({"member", "--cone", "cp", "tau"}) == 0);
  CHECK(run_cli({"member", "--cone", "cp", "transpose"}) == 1);
  CHECK(run_cli({"member", "--cone", "sp:1", "phi_abcd:1,1,1,0.333333"}) == 1);
}

TEST_CASE("cli dual-member matches the worked counterexamples") {
  CHECK(run_cli({"dual-member", "--cone", "example-K", "--which", "rdual",
                 "phi_abcd:0.333333333,1,1,1"}) == 1);
  CHECK(run_cli({"dual-member", "--cone", "example-K", "--which", "ldual",
                 "phi_abcd:0.333333333,1,1,1"}) == 0);
  CHECK(run_cli({"dual-member", "--cone", "example-K", "--which", "dual",
                 "phi_abcd:1,1,1,1"}) == 0);
  CHECK(run_cli({"dual-member", "--cone", "example-K", "--which", "cone", "tau"}) == 1);
}

TEST_CASE("cli pair and apply") {
  std::string out;
  CHECK(run_cli({"pair", "sigma", "sigma"}, &out) == 0);
  CHECK(std::stod(out) == Catch::Approx(5.0));

  // matrices from files
  Rng rng(7);
  BipartiteMatrix x(2, 2, random_hermitian(4, rng));
  TempFile fx("x.json", to_json(x).dump());
  std::string out2;
  CHECK(run_cli({"pair", fx.path, fx.path}, &out2) == 0);
  CHECK(std::stod(out2) == Catch::Approx(pairing(x, x)));

  TempFile fid("id.json", to_json(BipartiteMatrix(2, 1, Matrix(Matrix::Identity(2, 2)))).dump());
  std::string out3;
  CHECK(run_cli({"apply", "sigma", fid.path}, &out3) == 0);
  json j = json::parse(out3);
  // sigma(I) = I + e11
  CHECK(j["re"][0][0].get<double>() == Catch::Approx(2.0));
  CHECK(j["re"][1][1].get<double>() == Catch::Approx(1.0));
}

TEST_CASE("cli pt/flip round trip through files") {
  Rng rng(11);
  BipartiteMatrix x(2, 3, random_hermitian(6, rng));
  TempFile fx("pt.json", to_json(x).dump());
  std::string out;
  CHECK(run_cli({"pt", fx.path}, &out) == 0);
  BipartiteMatrix y = bipartite_from_json(json::parse(out));
  CHECK((y.mat() - partial_transpose(x).mat()).norm() == 0.0);
  std::string out2;
  CHECK(run_cli({"flip", fx.path}, &out2) == 0);
  BipartiteMatrix z = bipartite_from_json(json::parse(out2));
  CHECK(z.dimA() == 3);
  CHECK((z.mat() - flip(x).mat()).norm() == 0.0);
}

TEST_CASE("cli error codes") {
  TempFile bad("bad.json", "{ not json");
  CHECK(run_cli({"member", "--cone", "cp", bad.path}) == 3);
  // dimension mismatch between two maps
  CHECK(run_cli({"pair", "sigma", "identity:3"}) == 4);
  // unknown subcommand
  CHECK(run_cli({"frobnicate"}) >= 3);
}

TEST_CASE("cli compose and adjoint emit maps that re-read identically") {
  std::string out;
  CHECK(run_cli({"compose", "adjoint-of-sigma-placeholder", "sigma"}, &out) == 3);
  CHECK(run_cli({"adjoint", "sigma"}, &out) == 0);
  HPMap adj = hpmap_from_json(json::parse(out));
  CHECK((adj.choi().mat() - adjoint(sigma_map()).choi().mat()).norm() == 0.0);
  std::string out2;
  CHECK(run_cli({"compose", "sigma", "sigma"}, &out2) == 0);
  HPMap cc = hpmap_from_json(json::parse(out2));
  CHECK((cc.choi().mat() - compose(sigma_map(), sigma_map()).choi().mat()).norm() == 0.0);
}

TEST_CASE("cli ppt2 is reproducible and writes a ledger") {
  std::string ledger_path = "/tmp/mapcones_test_ledger.jsonl";
  std::remove(ledger_path.c_str());
  std::string a, b;
  CHECK(run_cli({"ppt2", "--dimA", "2", "--dimB", "2", "--trials", "3", "--seed", "5",
                 "--ledger", ledger_path},
                &a) == 0);
  CHECK(run_cli({"ppt2", "--dimA", "2", "--dimB", "2", "--trials", "3", "--seed", "5"},
                &b) == 0);
  CHECK(a == b);
  std::ifstream lf(ledger_path);
  REQUIRE(lf.good());
  std::string line;
  int lines = 0;
  while (std::getline(lf, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    CHECK(j["eb"]["status"] == "member");
    ++lines;
  }
  CHECK(lines == 3);
  std::remove(ledger_path.c_str());
}

TEST_CASE("cli harness subcommands") {
  std::string out;
  CHECK(run_cli({"one-sided-check", "--cone", "cp", "--samples", "8", "--seed", "3"},
                &out) == 0);
  CHECK(out.find("[ok]") != std::string::npos);
  // the worked cone intentionally fails the two stability checks
  CHECK(run_cli({"one-sided-check", "--cone", "example-K", "--samples", "6", "--seed", "3"},
                &out) == 1);
  CHECK(run_cli({"ampliation-check", "--cone", "example-K", "--side", "right", "--samples",
                 "6", "phi_abcd:1,1,1,1"},
                &out) == 0);
}

TEST_CASE("cli json verdict flag") {
  std::string out;
  CHECK(run_cli({"member", "--cone", "ppt", "tau", "--json"}, &out) == 1);
  json j = json::parse(out);
  CHECK(j["status"] == "non-member");
}
