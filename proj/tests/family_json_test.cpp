#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "dplimit/corpus.hpp"
#include "dplimit/errors.hpp"
#include "dplimit/family.hpp"
#include "dplimit/json_io.hpp"

using dplimit::Evaluation;

TEST(FamilyTest, RangeSyntaxes) {
  const auto c = dplimit::parse_family("cesaro:2..10:4");
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0].k, 2);
  EXPECT_EQ(c[2].k, 10);
  EXPECT_EQ(c[1].eval, Evaluation::cesaro(6));
  EXPECT_EQ(dplimit::parse_family("dirac:1..3")[2].eval, Evaluation::dirac(3));
  EXPECT_EQ(dplimit::parse_family("delayedcesaro:3..3")[0].eval, dplimit::delay(Evaluation::cesaro(3), 3));
  EXPECT_EQ(dplimit::parse_family("oddcomb:4..4")[0].eval, dplimit::odd_comb(4));
  EXPECT_EQ(dplimit::parse_family("evencomb:4..4")[0].eval, dplimit::even_comb(4));
  const auto alt = dplimit::parse_family("alternating:1..4");
  EXPECT_EQ(alt[0].eval, dplimit::even_comb(1));
  EXPECT_EQ(alt[1].eval, dplimit::odd_comb(2));
}

TEST(FamilyTest, DiscountedSyntaxes) {
  const auto g = dplimit::parse_family("discounted:geomgrid(0.5,0.005,3)");
  ASSERT_EQ(g.size(), 3u);
  EXPECT_DOUBLE_EQ(g[0].eval.discount(), 0.5);
  EXPECT_NEAR(g[1].eval.discount(), 0.05, 1e-15);
  EXPECT_NEAR(g[2].eval.discount(), 0.005, 1e-15);
  EXPECT_EQ(g[2].k, 3);
  const auto l = dplimit::parse_family("discounted:0.5,0.25");
  ASSERT_EQ(l.size(), 2u);
  EXPECT_EQ(l[1].eval, Evaluation::discounted(0.25));
}

TEST(FamilyTest, JsonList) {
  const auto f = dplimit::parse_family(R"([{"kind":"cesaro","n":3},{"kind":"dirac","t":2}])");
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[0].k, 1);
  EXPECT_EQ(f[1].eval, Evaluation::dirac(2));
}

TEST(FamilyTest, MalformedSpecsAreRejected) {
  for (const char* bad : {"", "cesaro", "cesaro:", "cesaro:5..2", "cesaro:0..3", "cesaro:1..5:0", "foo:1..3",
                          "cesaro:a..b", "discounted:geomgrid(0.5,0.1)", "discounted:2.0", "discounted:",
                          "[{\"kind\":\"nope\"}]", "[1,2", "[]"})
    EXPECT_THROW(dplimit::parse_family(bad), dplimit::InvalidFamily) << bad;
}

TEST(FamilyTest, Diagnostics) {
  const auto d = dplimit::diagnose_family(dplimit::parse_family("cesaro:1..200"), 1e-2);
  EXPECT_DOUBLE_EQ(d.final_tv, 1.0 / 200.0);
  EXPECT_DOUBLE_EQ(d.min_tv, 1.0 / 200.0);
  EXPECT_FALSE(d.impatient);
  EXPECT_FALSE(d.irregular);
  EXPECT_TRUE(dplimit::diagnose_family(dplimit::parse_family("cesaro:1..20"), 1e-2).impatient);
  EXPECT_TRUE(dplimit::diagnose_family(dplimit::parse_family(R"([{"kind":"cesaro","n":100},{"kind":"dirac","t":1}])"), 1e-2).irregular);
}

TEST(EvaluationJsonTest, RoundTrip) {
  for (const auto& theta : {Evaluation::cesaro(10), Evaluation::discounted(0.05), Evaluation::dirac(3),
                            Evaluation::weights({0.25, 0.75}),
                            dplimit::delay(Evaluation::weights({0.5, 0.5}), 5)})
    EXPECT_EQ(dplimit::evaluation_from_json(dplimit::evaluation_to_json(theta)), theta) << theta.describe();
  EXPECT_EQ(dplimit::parse_evaluation(R"({"kind":"delayed","m":2,"base":{"kind":"cesaro","n":3}})"),
            dplimit::delay(Evaluation::cesaro(3), 2));
}

TEST(EvaluationJsonTest, Errors) {
  for (const char* bad : {"{", "[]", R"({"kind":"cesaro"})", R"({"kind":"cesaro","n":"3"})",
                          R"({"kind":"cesaro","n":0})", R"({"kind":"weights","w":[0.5]})",
                          R"({"kind":"delayed","m":1})", R"({"kind":"spline"})", R"({"n":3})"})
    EXPECT_THROW(dplimit::parse_evaluation(bad), dplimit::InvalidEvaluation) << bad;
}

TEST(InstanceJsonTest, ProblemRoundTrip) {
  const auto p = dplimit::random_problem(6, 3, 4);
  const auto q = dplimit::problem_from_json(dplimit::problem_to_json(p));
  EXPECT_EQ(q.graph().names, p.graph().names);
  EXPECT_EQ(q.graph().successors, p.graph().successors);
  EXPECT_EQ(q.graph().rewards, p.graph().rewards);
}

TEST(InstanceJsonTest, HouseRoundTrip) {
  const auto g = dplimit::random_house(5, 3, 8);
  const auto h = dplimit::house_from_json(dplimit::house_to_json(g));
  EXPECT_EQ(h.names(), g.names());
  EXPECT_EQ(h.rewards(), g.rewards());
  for (std::size_t x = 0; x < g.size(); ++x) EXPECT_EQ(h.transitions(x), g.transitions(x));
}

TEST(InstanceJsonTest, ValidationErrors) {
  using nlohmann::json;
  EXPECT_THROW(dplimit::problem_from_json(json::parse(
                   R"({"states":["a"],"transitions":{"a":["a"]},"rewards":{"a":1.5}})")),
               dplimit::InvalidInstance);
  EXPECT_THROW(dplimit::problem_from_json(json::parse(
                   R"({"states":["a"],"transitions":{"a":["b"]},"rewards":{"a":0}})")),
               dplimit::InvalidInstance);
  EXPECT_THROW(dplimit::problem_from_json(json::parse(
                   R"({"states":["a","b"],"transitions":{"a":["b"],"b":["a"]},"rewards":{"a":0}})")),
               dplimit::InvalidInstance);
  EXPECT_THROW(dplimit::problem_from_json(json::parse(R"({"states":["a"],"transitions":{"a":[]},"rewards":{"a":0}})")),
               dplimit::InvalidInstance);
  EXPECT_THROW(dplimit::house_from_json(json::parse(
                   R"({"states":["a"],"transitions":{"a":[{"a":0.5}]},"rewards":{"a":0}})")),
               dplimit::InvalidInstance);
}

TEST(InstanceJsonTest, LoadInstanceSources) {
  using nlohmann::json;
  const auto reg = dplimit::load_instance("random", json{{"states", 4}, {"seed", 2}});
  EXPECT_EQ(std::get<dplimit::Problem>(reg).size(), 4u);
  const auto inline_problem = dplimit::load_instance(
      R"({"states":["a","b"],"transitions":{"a":["b"],"b":["a"]},"rewards":{"a":0,"b":1}})");
  EXPECT_EQ(std::get<dplimit::Problem>(inline_problem).graph().rewards, (std::vector<double>{0.0, 1.0}));
  const auto inline_house = dplimit::load_instance(
      R"({"states":["a","b"],"transitions":{"a":[{"a":0.5,"b":0.5}],"b":[{"b":1}]},"rewards":{"a":0,"b":1}})");
  EXPECT_TRUE(std::holds_alternative<dplimit::GamblingHouse>(inline_house));
  const auto gen = dplimit::load_instance(R"({"generator":"example2_tree","depth_cap":20})",
                                          json{{"branching_cap", 4}});
  EXPECT_EQ(std::get<dplimit::Problem>(gen).depth_cap(), 20u);
  EXPECT_EQ(std::get<dplimit::Problem>(gen).generator().branching_cap(), 5u);

  const auto path = std::filesystem::temp_directory_path() / "dplimit_load_instance_test.json";
  {
    std::ofstream f(path);
    f << dplimit::problem_to_json(dplimit::example1_cycle()).dump();
  }
  const auto from_file = dplimit::load_instance(path.string());
  EXPECT_EQ(std::get<dplimit::Problem>(from_file).graph().names, (std::vector<std::string>{"z0", "z1"}));
  std::filesystem::remove(path);

  EXPECT_THROW(dplimit::load_instance("no_such_instance"), dplimit::InvalidInstance);
  EXPECT_THROW(dplimit::load_instance("{\"states\":"), dplimit::InvalidInstance);
}

TEST(InstanceJsonTest, Round12) {
  EXPECT_EQ(dplimit::round12(0.1 + 0.2), 0.3);
  EXPECT_EQ(dplimit::round12(1.0 / 3.0), 0.333333333333);
  EXPECT_EQ(dplimit::round12(0.0), 0.0);
}
