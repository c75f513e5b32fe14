#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result sh(const std::string& cmd) {
  Result r;
  FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
  REQUIRE(p);
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fixture(const std::string& name) { return (fs::path(FIXTURE_DIR) / name).string(); }

Result tool(const std::string& args) { return sh(std::string(FLOWTOOL) + " " + args); }

json report(const Result& r) { return json::parse(r.out); }

fs::path scratch(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("flowtool-test-" + name);
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("fixtures are what the generator writes") {
  const fs::path dir = fs::temp_directory_path() / "flowtool-fixtures";
  fs::remove_all(dir);
  REQUIRE(sh(std::string(MAKE_FIXTURES) + " " + dir.string()).code == 0);
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    CAPTURE(e.path().filename());
    std::ifstream a(e.path()), b(fixture(e.path().filename().string()));
    REQUIRE(b);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
    ++n;
  }
  CHECK(n >= 10);
}

TEST_CASE("flow") {
  auto r = tool("flow " + fixture("fig2.graph") + " --capacity n0 n5");
  REQUIRE(r.code == 0);
  const json j = report(r);
  for (const auto& [n, v] : j["flow"].items()) CHECK(v == 1);
  CHECK(j["flow"].size() == 7);
  CHECK(j["capacity"]["value"] == 1);
  CHECK(report(tool("flow " + fixture("diamond.graph")))["flow"]["d"] == 2);
  CHECK(report(tool("flow " + fixture("inf-cycle.graph")))["flow"]["n2"] == "inf");
  const auto empty = scratch("empty.graph", R"({"domain":"path_count","labels":{"flat":[]},"nodes":[]})");
  r = tool("flow " + empty.string());
  CHECK(r.code == 0);
  CHECK(report(r)["flow"].empty());
}

TEST_CASE("check") {
  for (const char* f : {"fig2.graph", "fig12.snapshot", "harris-fig1.snapshot", "fig4-after.snapshot"}) {
    CAPTURE(f);
    auto r = tool(std::string("check ") + fixture(f));
    CHECK(r.code == 0);
    CHECK(report(r)["ok"] == true);
  }
  auto r = tool("check " + fixture("diamond.graph"));
  CHECK(r.code == 1);
  CHECK(report(r)["nodes"]["d"] == json::array({"inflow-one"}));
  r = tool("check " + fixture("fig12.snapshot"));
  CHECK(report(r)["gs"]["nodes"]["n"]["keyset"] == json::array({json::array({5, 7})}));
  // Domain mismatch, unknown condition, missing parameter.
  CHECK(tool("check " + fixture("fig2.graph") + " --condition dictionary:bptree").code == 2);
  CHECK(tool("check " + fixture("fig2.graph") + " --condition nosuch").code == 2);
  CHECK(tool("check " + fixture("inf-cycle.graph") + " --condition tree").code == 2);
  CHECK(tool("check " + fixture("inf-cycle.graph") + " --condition tree --param root=n1").code == 1);
}

TEST_CASE("split, compose and extend") {
  auto r = tool("split " + fixture("fig2.graph") + " --region n1,n2,n4");
  REQUIRE(r.code == 0);
  const json parts = report(r);
  CHECK(parts["region"]["inflow"] == json{{"n1", 1}, {"n2", 1}});
  CHECK(parts["context"]["inflow"] == json{{"n0", 1}, {"n3", 1}, {"n5", 1}, {"n6", 1}});
  const auto a = scratch("a.graph", parts["region"].dump());
  const auto b = scratch("b.graph", parts["context"].dump());
  r = tool("compose " + a.string() + " " + b.string());
  REQUIRE(r.code == 0);
  CHECK(report(r)["inflow"] == json{{"n0", 1}});
  r = tool("compose " + a.string() + " " + a.string());
  CHECK(r.code == 1);
  CHECK(report(r)["defined"] == false);
  CHECK(tool("compose " + a.string() + " " + fixture("fig12.snapshot")).code == 2);

  const std::string fig4 = fixture("fig4-before.snapshot") + " " + fixture("fig4-after.snapshot");
  r = tool("extend " + fig4 + " --region l,n");
  CHECK(r.code == 0);
  CHECK(report(r)["extension"] == true);
  CHECK(report(r)["context_recomposes"] == true);
  r = tool("extend " + fig4 + " --region l");
  CHECK(r.code == 1);
  CHECK(report(r)["extension"] == false);
  CHECK(report(r)["after"]["flowmap"] == json::array({{{"source", "l"}, {"sink", "n"}, {"value", 1}}}));
  CHECK(tool("extend " + fig4 + " --region q").code == 2);
  CHECK(tool("extend " + fixture("fig4-before.snapshot") + " " + fixture("fig4-before.snapshot") + " --region l").code ==
        0);
}

TEST_CASE("simulate and lin") {
  auto r = tool("simulate " + fixture("sorted-list.run"));
  CHECK(r.code == 0);
  CHECK(report(r)["verdict"] == "pass");
  r = tool("simulate " + fixture("harris.run"));
  CHECK(r.code == 0);
  CHECK(report(r)["report"]["schedules"].is_number());
  r = tool("simulate " + fixture("harris.run") + " --mutant skip_marking");
  CHECK(r.code == 1);
  const json cx = report(r)["counterexample"];
  CHECK_FALSE(cx["schedule"].empty());
  CHECK(cx["replay"].size() == cx["schedule"].size());
  CHECK(tool("simulate " + fixture("harris-skip-marking.run")).code == 1);
  CHECK(tool("simulate " + fixture("sorted-list-skip-range.run")).code == 1);
  r = tool("simulate " + fixture("bptree.run") + " --seed 5");
  CHECK(r.code == 0);
  CHECK(report(r)["runs"][0]["complete"] == true);
  CHECK(tool("simulate " + fixture("harris.run") + " --mutant nosuch").code == 2);
  CHECK(tool("simulate " + fixture("fig2.graph")).code == 2);

  r = tool("lin " + fixture("double-insert.history"));
  CHECK(r.code == 1);
  CHECK(report(r)["linearizable"] == false);
  r = tool("lin " + fixture("insert-member.history"));
  CHECK(r.code == 0);
  CHECK(report(r)["agree"] == true);
  const auto pending = scratch("pending.history", R"({"events":[{"tid":1,"call":"insert","key":5}]})");
  CHECK(tool("lin " + pending.string()).code == 0);
}

TEST_CASE("usage and malformed input") {
  CHECK(tool("").code == 2);
  CHECK(tool("nosuch").code == 2);
  CHECK(tool("flow").code == 2);
  CHECK(tool("flow /nonexistent/file").code == 2);
  CHECK(tool("flow " + scratch("bad.graph", "{bad").string()).code == 2);
  CHECK(tool("flow " + fixture("fig2.graph") + " --domain keyset").code == 2);
  CHECK(tool("flow " + fixture("fig2.graph") + " --domain path_count").code == 0);
  CHECK(tool("flow " + fixture("fig2.graph") + " --capacity n0 zz").code == 2);
  CHECK(tool("--help").code == 0);
}
