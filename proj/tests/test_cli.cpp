#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vcsim/commands.hpp"

using namespace vcsim;

namespace {

struct Run {
  int rc;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "vcsim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int rc = run_cli(int(argv.size()), argv.data(), out, err);
  return {rc, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);)
    if (!l.empty() && l[0] != '#') v.push_back(l);
  return v;
}

std::vector<std::string> cells(const std::string& line) {
  std::vector<std::string> v;
  std::istringstream in(line);
  for (std::string c; std::getline(in, c, ',');) v.push_back(c);
  return v;
}

std::string find_row(const std::string& csv, const std::string& prefix) {
  for (const auto& l : lines(csv))
    if (l.rfind(prefix, 0) == 0) return l;
  return {};
}

}  // namespace

TEST_CASE("dse default sweep") {
  const auto r = run({"dse"});
  REQUIRE(r.rc == 0);
  const auto ls = lines(r.out);
  CHECK(ls.size() == 1 + 15);
  const auto row = cells(find_row(r.out, "2,16,"));
  REQUIRE(row.size() == 12);
  CHECK(std::stod(row[2]) == Catch::Approx(0.5).margin(0.05));
  CHECK(r.err.find("manifest-sha256: ") != std::string::npos);
  CHECK(r.out.rfind("# manifest: ", 0) == 0);
}

TEST_CASE("dse selection") {
  const auto r = run({"dse", "--slices", "1,2", "--lanes", "1,2,4,8,16"});
  REQUIRE(r.rc == 0);
  CHECK(lines(r.out).size() == 11);
}

TEST_CASE("usage errors exit 1") {
  CHECK(run({}).rc == 1);
  CHECK(run({"frobnicate"}).rc == 1);
  CHECK(run({"dse", "--bogus"}).rc == 1);
  CHECK(run({"simulate", "--network", "alexnet"}).rc == 1);
  CHECK(run({"compare", "--config", "style=vector,memory=ddr4", "--suite", "homogeneous"}).rc == 1);
  CHECK(run({"compare", "--config", "style=vector", "--config", "style=scalar"}).rc == 1);
}

TEST_CASE("input errors exit 2") {
  auto r = run({"dse", "--params", "/nonexistent/params.json"});
  CHECK(r.rc == 2);
  CHECK(r.err.find("/nonexistent/params.json") != std::string::npos);
  CHECK(run({"simulate", "--network", "nosuchnet", "--style", "vector"}).rc == 2);
  CHECK(run({"simulate", "--network", "alexnet", "--style", "systolic"}).rc == 2);
  CHECK(run({"simulate", "--network", "alexnet", "--style", "vector", "--memory", "ddr9"}).rc == 2);
  CHECK(run({"dse", "--slices", "3"}).rc == 1);

  const auto junk = std::filesystem::temp_directory_path() / "vcsim_junk.json";
  std::ofstream(junk) << "{\"schema\": \"something-else\"}";
  CHECK(run({"dse", "--params", junk.string()}).rc == 2);

  const auto bad = std::filesystem::temp_directory_path() / "vcsim_bad.net";
  std::ofstream(bad) << "schema vcsim-network 1\nname x\nlayer a kind=fc M=0 K=4\n";
  r = run({"simulate", "--network", bad.string(), "--style", "vector"});
  CHECK(r.rc == 2);
  CHECK(r.err.find("line 3") != std::string::npos);
}

TEST_CASE("simulate CSV") {
  const auto r = run({"simulate", "--network", "vgg16", "--style", "vector", "--memory", "ddr4"});
  REQUIRE(r.rc == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 1 + 16 + 1);
  CHECK(ls[0].rfind("layer,bw_x,bw_w,macs,", 0) == 0);
  int compute = 0;
  for (std::size_t i = 1; i <= 13; ++i) compute += cells(ls[i]).back() == "compute";
  CHECK(compute > 6);
  CHECK(ls.back().rfind("total,", 0) == 0);
}

TEST_CASE("simulate warnings and styles") {
  const auto conv = run({"simulate", "--network", "resnet18", "--style", "conventional"});
  REQUIRE(conv.rc == 0);
  CHECK(conv.err.find("warning") != std::string::npos);
  const auto hom = run({"simulate", "--network", "resnet18", "--style", "conventional", "--homogeneous"});
  CHECK(hom.err.find("warning") == std::string::npos);

  const auto total = [](const std::string& csv) { return std::stod(cells(find_row(csv, "total,"))[7]); };
  const auto v = run({"simulate", "--network", "resnet18", "--style", "vector"});
  const auto s = run({"simulate", "--network", "resnet18", "--style", "scalar"});
  CHECK(total(v.out) < total(s.out));
  const auto c = run({"simulate", "--network", "resnet18", "--style", "vector", "--memory", "custom",
                      "--bandwidth", "16", "--pj-per-bit", "15"});
  CHECK(lines(c.out) == lines(v.out));
}

TEST_CASE("compare") {
  const std::vector<std::string> base{"compare", "--config", "style=conventional,memory=ddr4",
                                      "--config", "style=vector,memory=ddr4",
                                      "--config", "style=vector,memory=hbm2"};
  auto args = base;
  args.insert(args.end(), {"--network", "rnn", "--network", "alexnet"});
  const auto r = run(args);
  REQUIRE(r.rc == 0);
  CHECK(r.out.find("# averages: geometric mean over networks") != std::string::npos);
  const auto ls = lines(r.out);
  CHECK(ls[0] == "network,config,runtime_s,energy_pj,speedup,energy_reduction");
  CHECK(ls.size() == 1 + 3 * 3);
  for (const std::string net : {"rnn", "alexnet", "geomean"}) {
    const auto b = cells(find_row(r.out, net + ",conventional-ddr4,"));
    const auto d = cells(find_row(r.out, net + ",vector-ddr4,"));
    const auto h = cells(find_row(r.out, net + ",vector-hbm2,"));
    REQUIRE(b.size() == 6);
    CHECK(std::stod(b[4]) == 1.0);
    CHECK(std::stod(h[4]) >= std::stod(d[4]));
  }
  CHECK(run(args).out == r.out);

  const auto self = run({"compare", "--config", "style=vector,memory=ddr4,label=a", "--config",
                         "style=vector,memory=ddr4,label=b", "--network", "lstm"});
  REQUIRE(self.rc == 0);
  CHECK(cells(find_row(self.out, "lstm,b,"))[4] == "1");
  CHECK(cells(find_row(self.out, "lstm,b,"))[5] == "1");
}

TEST_CASE("compare writes --out and a manifest") {
  const auto path = std::filesystem::temp_directory_path() / "vcsim_cmp.csv";
  std::filesystem::remove(path);
  const auto r = run({"compare", "--config", "style=scalar,memory=ddr4", "--config",
                      "style=vector,memory=ddr4", "--suite", "heterogeneous", "--out", path.string()});
  REQUIRE(r.rc == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto body = ss.str();
  CHECK(body.rfind("# manifest: ", 0) == 0);
  CHECK(body.find("# manifest-sha256: ") != std::string::npos);
  const auto pos = r.err.find("manifest-sha256: ");
  REQUIRE(pos != std::string::npos);
  const auto digest = r.err.substr(pos + 17, 64);
  CHECK(body.find(digest) != std::string::npos);
  CHECK(lines(body).size() == 1 + 7 * 2);
}

TEST_CASE("calibrate reproduces the shipped parameters") {
  const auto r = run({"calibrate"});
  REQUIRE(r.rc == 0);
  CHECK(r.out.find("vcsim-cost-params") != std::string::npos);
  CHECK(r.out.find("max_relative_error") != std::string::npos);
  CHECK(run({"calibrate", "--mult-ratio", "-1"}).rc == 2);
}

TEST_CASE("installed binary exit codes") {
  const char* bin = std::getenv("VCSIM_BIN");
  if (!bin) SKIP("VCSIM_BIN not set");
  const std::string b = bin;
  const auto code = [](const std::string& cmd) {
    const int s = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(s);
  };
  CHECK(code(b + " dse") == 0);
  CHECK(code(b + " --nope") == 1);
  CHECK(code(b + " dse --params /nonexistent.json") == 2);
  CHECK(code(b + " --help") == 0);
}
