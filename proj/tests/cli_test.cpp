#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "common.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
};

Result run_cli(const std::string& args) {
  const std::string cmd = std::string("'") + RWTA_CLI + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const std::string& name) { return std::string("'") + RWTA_DATA + "/" + name + "'"; }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("rwta_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& content) {
    fs::path p = dir_ / name;
    std::ofstream(p) << content;
    return "'" + p.string() + "'";
  }
  std::string path(const std::string& name) const { return "'" + (dir_ / name).string() + "'"; }
  std::string read(const std::string& name) const {
    std::ifstream in(dir_ / name);
    return std::string(std::istreambuf_iterator<char>(in), {});
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, KernelTsv) {
  Result r = run_cli("kernel " + data("left.trees") + " " + data("right.trees"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "value\t15\na\t3\t1\t3\nb\t2\t3\t6\nf(h(a),h(b))\t1\t1\t1\nh(a)\t3\t1\t3\nh(b)\t1\t2\t2\n");
}

TEST_F(Cli, KernelStructuredWithOracles) {
  Result r = run_cli("kernel --format structured --oracle direct dp " + data("left.trees") + " " + data("right.trees"));
  ASSERT_EQ(r.code, 0);
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["value"], 15);
  EXPECT_EQ(doc["common_subtrees"].size(), 5u);
  EXPECT_EQ(doc["sizes"]["common"], 5);
  EXPECT_EQ(doc["oracles"]["direct"]["value"], 15);
  EXPECT_EQ(doc["oracles"]["dp"]["agrees"], true);
}

TEST_F(Cli, KernelSubsetTrees) {
  Result r = run_cli("kernel --kernel sst " + file("x", "f(a,b)\n") + " " + file("y", "f(b,a)\n"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "value\t3\n");
  EXPECT_EQ(run_cli("kernel --kernel sst --oracle dp " + path("x") + " " + path("y")).code, 1);
}

TEST_F(Cli, KernelDumps) {
  Result r = run_cli("kernel " + data("left.trees") + " " + data("right.trees") + " --dump-series " + path("s") +
                     " --dump-automaton " + path("p"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(read("s"), "3\ta\n6\tb\n1\tf(h(a),h(b))\n3\th(a)\n2\th(b)\n");
  rwta::NaturalRwta p = rwta::parse_automaton<rwta::Natural>(read("p"));
  EXPECT_EQ(p.state_count(), 5u);
  std::uint64_t total = 0;
  for (auto w : p.nu_table()) total += w;
  EXPECT_EQ(total, 15u);
}

TEST_F(Cli, KernelEdgeCases) {
  std::string empty = file("empty", "# nothing here\n\n");
  EXPECT_EQ(run_cli("kernel " + empty + " " + data("right.trees")).out, "value\t0\n");
  EXPECT_EQ(run_cli("kernel " + empty + " " + empty).out, "value\t0\n");
  std::string other = file("other", "g(c,k(d))\nd\n");
  Result disjoint = run_cli("kernel " + data("left.trees") + " " + other);
  EXPECT_EQ(disjoint.code, 0);
  EXPECT_EQ(disjoint.out, "value\t0\n");
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("kernel " + file("bad", "f(a,b)\nf(a)\n") + " " + data("right.trees")).code, 2);
  EXPECT_EQ(run_cli("kernel " + file("syntax", "f(a,\n") + " " + data("right.trees")).code, 2);
  EXPECT_EQ(run_cli("kernel " + file("clash", "h(a,a)\n") + " " + data("right.trees")).code, 2);
  EXPECT_EQ(run_cli("kernel " + path("missing") + " " + data("right.trees")).code, 1);
  EXPECT_EQ(run_cli("kernel").code, 1);
  EXPECT_EQ(run_cli("frobnicate").code, 1);
  EXPECT_EQ(run_cli("--help").code, 0);
}

TEST_F(Cli, OverflowExitsFour) {
  std::string huge = file("huge.rwta", "[alphabet]\na/0\n[states]\nq\n[nu]\nq\t18446744073709551615\n[transitions]\nq\ta\t\n");
  EXPECT_EQ(run_cli("automaton build " + huge).code, 0);
  EXPECT_EQ(run_cli("automaton product " + huge + " " + huge).code, 4);
  std::string wider = file("wider.rwta", "[alphabet]\na/0\n[states]\nq\n[nu]\nq\t18446744073709551616\n");
  EXPECT_EQ(run_cli("automaton build " + wider).code, 4);
}

TEST_F(Cli, AutomatonOps) {
  Result seq = run_cli("automaton sequentialize " + data("t1.trees"));
  EXPECT_EQ(seq.code, 0);
  EXPECT_EQ(seq.out, "states\t5\ntransitions\t5\n");
  EXPECT_EQ(run_cli("automaton build-indexed " + data("t1.trees")).out, "states\t7\ntransitions\t7\n");
  EXPECT_EQ(run_cli("automaton quotient-h " + data("t1.trees")).out, "states\t5\ntransitions\t5\n");
  EXPECT_EQ(run_cli("automaton build " + data("left.trees")).out, "states\t7\ntransitions\t7\n");
  EXPECT_EQ(run_cli("automaton sum " + data("chain.rwta") + " " + data("primed.rwta")).out.substr(0, 10), "states\t10\n");
  Result prod = run_cli("automaton product " + data("chain.rwta") + " " + data("primed.rwta") + " -o -");
  ASSERT_EQ(prod.code, 0);
  auto nu = rwta::testing::nu_by_label(rwta::parse_automaton<rwta::Natural>(prod.out));
  EXPECT_EQ(nu.size(), 6u);
  EXPECT_EQ(nu.at("(3,3')"), 2u);
  EXPECT_EQ(nu.at("(5,2')"), 12u);
  EXPECT_EQ(run_cli("automaton sum " + data("chain.rwta")).code, 1);
  EXPECT_EQ(run_cli("automaton quotient-h " + data("chain.rwta")).code != 0, true);
}

TEST_F(Cli, AutomatonDumpRoundTrip) {
  ASSERT_EQ(run_cli("automaton sequentialize " + data("t1.trees") + " -o " + path("seq.rwta")).code, 0);
  auto nu = rwta::testing::nu_by_label(rwta::parse_automaton<rwta::Natural>(read("seq.rwta")));
  EXPECT_EQ(nu, (std::map<std::string, std::uint64_t>{
                    {"{a@3,a@6}", 2}, {"{h@2(a@3),h@5(a@6)}", 2}, {"b@7", 1}, {"f@4(h@5(a@6),b@7)", 1},
                    {"f@1(h@2(a@3),f@4(h@5(a@6),b@7))", 1}}));
  Result again = run_cli("automaton build " + path("seq.rwta"));
  EXPECT_EQ(again.out, "states\t5\ntransitions\t5\n");
}

TEST_F(Cli, CheckSuites) {
  Result ok = run_cli("check " + data("left.trees") + " --trials 20 --suite sum product");
  EXPECT_EQ(ok.code, 0);
  EXPECT_NE(ok.out.find("PASS\tsum"), std::string::npos);
  EXPECT_NE(ok.out.find("PASS\tproduct"), std::string::npos);
  Result bad = run_cli("check --trials 20 --suite sum --inject-fault sum");
  EXPECT_EQ(bad.code, 3);
  EXPECT_NE(bad.out.find("FAIL\tsum"), std::string::npos);
  EXPECT_EQ(run_cli("check --trials 5 --suite nonsense").code, 1);
  Result structured = run_cli("check --trials 5 --suite kernel-oracles --format structured");
  ASSERT_EQ(structured.code, 0);
  EXPECT_EQ(nlohmann::json::parse(structured.out)["suites"][0]["passed"], true);
}

TEST_F(Cli, Matrix) {
  Result r = run_cli("matrix " + data("left.trees") + " " + data("right.trees"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "26\t15\n15\t18\n");
  Result per_tree = run_cli("matrix --per-tree --threads 2 " + data("left.trees"));
  EXPECT_EQ(per_tree.out, "11\t5\n5\t5\n");
}

TEST_F(Cli, Bench) {
  Result r = run_cli("bench --sizes 500,1000 --trials 1 --format structured");
  ASSERT_EQ(r.code, 0);
  auto doc = nlohmann::json::parse(r.out);
  ASSERT_EQ(doc["rows"].size(), 2u);
  EXPECT_TRUE(doc["rows"][1].contains("build_ratio"));
  EXPECT_EQ(run_cli("bench --sizes 1000,500").code, 1);
}
