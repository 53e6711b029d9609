#include <gtest/gtest.h>

#include <regex>
#include <set>

#include "lpkit/cli/corpus.hpp"

using namespace lpkit;
using namespace lpkit::cli;

TEST(Corpus, IdsAreUniqueAndAnchored)
{
    auto cases = corpus::all_cases();
    EXPECT_GE(cases.size(), 30u);
    std::set<std::string> ids;
    const std::regex anchor(R"(^section[1-5]: ".+"$)");
    for (const auto& c : cases) {
        EXPECT_TRUE(ids.insert(c.id).second) << c.id;
        EXPECT_TRUE(std::regex_match(c.paper_anchor, anchor)) << c.paper_anchor;
        ASSERT_FALSE(c.tags.empty());
        EXPECT_EQ(c.paper_anchor.substr(0, c.tags[0].size()), c.tags[0]);
        EXPECT_TRUE(c.check) << c.id;
        EXPECT_FALSE(c.expected.is_null()) << c.id;
    }
}

TEST(Corpus, CoversEverySection)
{
    std::set<std::string> sections;
    for (const auto& c : corpus::all_cases())
        for (const auto& t : c.tags)
            if (t.rfind("section", 0) == 0)
                sections.insert(t);
    EXPECT_EQ(sections, (std::set<std::string>{"section1", "section2", "section3", "section4", "section5"}));
}

TEST(Corpus, Filters)
{
    auto cases = corpus::all_cases();
    std::size_t s2 = 0, p40 = 0;
    for (const auto& c : cases) {
        EXPECT_TRUE(corpus::matches(c, ""));
        if (corpus::matches(c, "section2")) {
            ++s2;
            EXPECT_EQ(c.tags[0], "section2");
        }
        if (corpus::matches(c, "problem40"))
            ++p40;
    }
    EXPECT_GT(s2, 0u);
    EXPECT_EQ(p40, 3u);
}

TEST(Corpus, TaggedToeplitzCasesPass)
{
    std::vector<corpus::CorpusCase> selected;
    for (auto& c : corpus::all_cases())
        if (corpus::matches(c, "problem40"))
            selected.push_back(std::move(c));
    auto results = corpus::run(selected, 2);
    ASSERT_EQ(results.size(), selected.size());
    EXPECT_TRUE(std::is_sorted(results.begin(), results.end(), [](const auto& a, const auto& b) { return a.id < b.id; }));
    for (const auto& r : results)
        EXPECT_EQ(r.status, corpus::Status::pass) << r.id << ": " << r.detail;
    EXPECT_TRUE(corpus::all_ok(results));
}

TEST(Corpus, FailingCheckIsRecordedNotThrown)
{
    corpus::CorpusCase c{"x-broken", "section1: \"q\"", {"section1"}, "ms-test", json{{"seq", "one"}, {"max_degree", 2}}, json::object(),
        [](int, const json& doc) -> corpus::Verdict { return corpus::Verdict{corpus::Status::pass, doc.at("no_such_key").dump()}; }};
    auto r = corpus::run_case(c);
    EXPECT_EQ(r.status, corpus::Status::error);
    corpus::CorpusCase bad_exit{"x-exit", "section1: \"q\"", {"section1"}, "ms-test", json{{"seq", "poly("}, {"max_degree", 2}},
        json::object(), corpus::detail::first_failure(std::nullopt)};
    auto e = corpus::run_case(bad_exit);
    EXPECT_EQ(e.status, corpus::Status::fail);
    EXPECT_EQ(e.exit_code, exit_usage);
    EXPECT_FALSE(corpus::all_ok({r}));
}

TEST(Corpus, CsvQuoting)
{
    EXPECT_EQ(corpus::csv_field("plain"), "plain");
    EXPECT_EQ(corpus::csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(corpus::csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
}

TEST(RunCommand, ExitCodeContract)
{
    auto ok = run_command("ms-test", json{{"seq", "log2"}, {"max_degree", 5}});
    EXPECT_EQ(ok.exit_code, exit_ok);
    EXPECT_EQ(ok.document["result"]["first_failure"], 3);
    EXPECT_EQ(ok.document["schema_version"], "1");

    auto parse = run_command("ms-test", json{{"seq", "poly(1,2"}, {"max_degree", 5}});
    EXPECT_EQ(parse.exit_code, exit_usage);
    EXPECT_EQ(parse.document["error"]["position"], 8);

    EXPECT_EQ(run_command("ms-test", json{{"seq", "one"}}).exit_code, exit_usage);
    EXPECT_EQ(run_command("ms-test", json{{"seq", "one"}, {"max_degree", "five"}}).exit_code, exit_usage);
    EXPECT_EQ(run_command("frobnicate", json::object()).exit_code, exit_usage);
    EXPECT_EQ(run_command("eval", json{{"fn", "besselB"}, {"s", "1/3"}, {"x", "1"}, {"method", "integral"}}).exit_code, exit_domain);
    EXPECT_EQ(run_command("totpos", json{{"seq", "one"}, {"N", 14}, {"max_order", 7}}).exit_code, exit_domain);
    EXPECT_EQ(run_command("eval", json{{"fn", "gamma"}, {"x", "0"}}).exit_code, exit_domain);
}

TEST(RunCommand, Deterministic)
{
    json args{{"seq", "exp_sqrt(1)|divfact"}, {"max_degree", 8}, {"coefficients", true}, {"threads", 3}};
    auto a = run_command("ms-test", args);
    args["threads"] = 1;
    auto b = run_command("ms-test", args);
    EXPECT_EQ(a.document.dump(), b.document.dump());
}

TEST(Report, Serialization)
{
    EXPECT_EQ(report::rational(make_rational(-3, 6)), "-1/2");
    EXPECT_EQ(report::rational(BigRational(4)), "4/1");
    auto b = report::ball(HPFloat::exact(make_rational(1, 3), 128));
    EXPECT_EQ(b["value"].get<std::string>().substr(0, 8), "0.333333");
    EXPECT_TRUE(b.contains("err"));
    auto t = report::term(seq::TermValue::rational(make_rational(2, 7), 64));
    EXPECT_EQ(t["exact"], "2/7");
}

TEST(LpFunctionParsing, RoundTrip)
{
    for (const char* text : {"sq_fact", "even_fact", "one", "exp_r(1/2)"})
        EXPECT_EQ(parse_lp_function(text).to_string(), text);
    auto p = parse_lp_function("poly_times_exp(1,2,1;1/3)");
    EXPECT_EQ(p.kind(), families::LPFunction::Kind::poly_times_exp);
    EXPECT_EQ(p.rate(), make_rational(1, 3));
    EXPECT_EQ(p.polynomial().degree(), 2);
    EXPECT_THROW(parse_lp_function("cosh"), UsageError);
    EXPECT_THROW(parse_lp_function("poly_times_exp(1,-1)"), DomainError);
}
