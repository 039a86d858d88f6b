#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "appraise/classic/facility_location.hpp"
#include "appraise/classic/similarity.hpp"
#include "appraise/io/design_io.hpp"
#include "appraise/optimizer/greedy.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace appraise;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

struct Run {
  int status = -1;
  std::string out;
};

Run run_cli(const std::string& args) {
  const std::string cmd = std::string(SPECTRAL_APPRAISE_BIN) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string toy() { return std::string(TESTDATA_DIR) + "/toy8.csv"; }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "spectral_appraise_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write_lines(const fs::path& p, const std::vector<Index>& v) {
  std::ofstream f(p);
  for (Index i : v) f << i << "\n";
}

std::vector<Index> as_indices(const json& arr) { return arr.get<std::vector<Index>>(); }

}  // namespace

TEST_CASE("cli select fl max matches the library greedy") {
  const Run r = run_cli("select --data " + toy() + " --objective fl --mode max --k 3");
  REQUIRE(r.status == 0);
  const json doc = json::parse(r.out);

  const DesignMatrix d = io::read_csv(toy());
  auto sim = std::make_shared<const classic::SparseSimilarity>(
      classic::build_similarity(d, classic::Kernel::rbf(1.0), classic::kDefaultTopK));
  classic::FacilityLocation fl(sim);
  const auto want = optimizer::greedy_max(fl, optimizer::Constraint::cardinality(3));
  CHECK(as_indices(doc["order"]) == want.order);
  CHECK(doc["final_value"].get<double>() == doctest::Approx(want.final_value).epsilon(1e-12));
  // One pick per cluster on this toy set.
  std::vector<Index> clusters;
  for (Index i : want.order) clusters.push_back(i < 3 ? 0 : i < 6 ? 1 : 2);
  std::sort(clusters.begin(), clusters.end());
  CHECK(clusters == std::vector<Index>{0, 1, 2});
}

TEST_CASE("cli random mode with k = n is a permutation") {
  const Run r = run_cli("select --data " + toy() + " --mode random --k 8 --seed 4");
  REQUIRE(r.status == 0);
  std::vector<Index> order = as_indices(json::parse(r.out)["order"]);
  std::sort(order.begin(), order.end());
  CHECK(order == std::vector<Index>{0, 1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("cli min mode with a full prefix echoes it") {
  const fs::path prefix = scratch("prefix.txt");
  write_lines(prefix, {5, 2, 7});
  const Run r = run_cli("select --data " + toy() + " --objective dpp --mode min --k 3 --prefix " + prefix.string());
  REQUIRE(r.status == 0);
  CHECK(as_indices(json::parse(r.out)["order"]) == std::vector<Index>{5, 2, 7});
}

TEST_CASE("cli stratified mode honours per-class quotas") {
  const Run r = run_cli("select --data " + toy() + " --mode stratified --labels " + std::string(TESTDATA_DIR) +
                        "/toy8.labels --quotas-per-class 1 --seed 2");
  REQUIRE(r.status == 0);
  std::vector<Index> order = as_indices(json::parse(r.out)["order"]);
  REQUIRE(order.size() == 3);
  std::vector<Index> seen;
  for (Index i : order) seen.push_back(i < 3 ? 0 : i < 6 ? 1 : 2);
  std::sort(seen.begin(), seen.end());
  CHECK(seen == std::vector<Index>{0, 1, 2});
}

TEST_CASE("cli score rejects duplicate and out-of-range indices") {
  const fs::path dup = scratch("dup.txt");
  write_lines(dup, {1, 1});
  CHECK(run_cli("score --data " + toy() + " --subset " + dup.string()).status == 2);
  const fs::path far = scratch("far.txt");
  write_lines(far, {0, 8});
  CHECK(run_cli("score --data " + toy() + " --subset " + far.string()).status == 2);
}

TEST_CASE("cli error exit codes") {
  CHECK(run_cli("select --data /nonexistent/x.csv --k 2").status == 3);
  CHECK(run_cli("select --data " + toy() + " --k 20").status == 2);
  CHECK(run_cli("select --data " + toy() + " --objective dpp --t -1 --k 2").status == 2);
}

TEST_CASE("cli score is invariant to subset order") {
  const fs::path a = scratch("a.txt"), b = scratch("b.txt");
  write_lines(a, {0, 4, 7, 2});
  write_lines(b, {7, 2, 0, 4});
  for (const char* obj : {"vendi", "dpp", "fl"}) {
    const Run ra = run_cli("score --data " + toy() + " --objective " + obj + " --subset " + a.string());
    const Run rb = run_cli("score --data " + toy() + " --objective " + obj + " --subset " + b.string());
    REQUIRE(ra.status == 0);
    REQUIRE(rb.status == 0);
    CHECK(json::parse(ra.out)["value"].get<double>() ==
          doctest::Approx(json::parse(rb.out)["value"].get<double>()).epsilon(1e-12));
  }
}

TEST_CASE("cli vendi prefers orthogonal rows over duplicates") {
  const fs::path data = scratch("pairs.csv");
  {
    std::ofstream f(data);
    f << "1,0\n1,0\n0,1\n";
  }
  const fs::path same = scratch("same.txt"), orth = scratch("orth.txt");
  write_lines(same, {0, 1});
  write_lines(orth, {0, 2});
  const Run rs = run_cli("score --data " + data.string() + " --subset " + same.string() + " --q 1");
  const Run ro = run_cli("score --data " + data.string() + " --subset " + orth.string() + " --q 1");
  REQUIRE(rs.status == 0);
  REQUIRE(ro.status == 0);
  const double vs = json::parse(rs.out)["vendi"]["score"].get<double>();
  const double vo = json::parse(ro.out)["vendi"]["score"].get<double>();
  CHECK(vs == doctest::Approx(1.0));
  CHECK(vo == doctest::Approx(2.0));
}

TEST_CASE("cli reads DMX1 and CSV identically") {
  const DesignMatrix d = io::read_csv(toy());
  const fs::path bin = scratch("toy8.dmx1");
  io::write_dmx1(bin.string(), d, io::DType::f64);
  const Run rc = run_cli("select --data " + toy() + " --objective vendi --mode max --k 4");
  const Run rb = run_cli("select --data " + bin.string() + " --objective vendi --mode max --k 4");
  REQUIRE(rc.status == 0);
  REQUIRE(rb.status == 0);
  CHECK(json::parse(rc.out)["order"] == json::parse(rb.out)["order"]);
}

TEST_CASE("dmx1 round trip is bit exact") {
  std::mt19937_64 rng(77);
  const DesignMatrix d = testsupport::gaussian(13, 5, rng);
  {
    std::stringstream s;
    io::write_dmx1(s, d, io::DType::f64);
    const DesignMatrix back = io::read_dmx1(s);
    CHECK(std::memcmp(back.data(), d.data(), sizeof(double) * d.size()) == 0);
  }
  {
    const DesignMatrix narrowed = d.cast<float>().cast<double>();
    std::stringstream s;
    io::write_dmx1(s, narrowed, io::DType::f32);
    const DesignMatrix back = io::read_dmx1(s);
    CHECK(std::memcmp(back.data(), narrowed.data(), sizeof(double) * d.size()) == 0);
  }
}
