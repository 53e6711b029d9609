#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

#include "lpkit/cli/corpus.hpp"

using lpkit::cli::json;

namespace {

/// Collects typed option values into the JSON argument object consumed by
/// run_command; only options given on the command line appear.
class ArgSink {
public:
    template <class T>
    CLI::Option* option(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help)
    {
        auto v = std::make_shared<T>();
        CLI::Option* o = app->add_option(flag, *v, help);
        fill_.push_back([this, v, o, key] {
            if (o->count() > 0)
                args_[key] = *v;
        });
        return o;
    }

    CLI::Option* flag(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help)
    {
        auto v = std::make_shared<bool>(false);
        CLI::Option* o = app->add_flag(flag, *v, help);
        fill_.push_back([this, v, key] {
            if (*v)
                args_[key] = true;
        });
        return o;
    }

    json collect()
    {
        for (auto& f : fill_)
            f();
        return args_;
    }

private:
    json args_ = json::object();
    std::vector<std::function<void()>> fill_;
};

void flatten(const json& j, const std::string& prefix, std::ostream& os)
{
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
    } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
        for (std::size_t i = 0; i < j.size(); ++i)
            flatten(j[i], prefix + "[" + std::to_string(i) + "]", os);
    } else {
        os << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
    }
}

void print_ms_table(const json& r, std::ostream& os)
{
    os << "spec: " << r["spec"].get<std::string>() << '\n';
    os << "first failure: " << (r["first_failure"].is_null() ? std::string("none") : r["first_failure"].dump()) << " (through degree "
       << r["max_degree"].dump() << ")\n";
    os << "degree  verdict          real  pairs  certified\n";
    for (const auto& d : r["per_degree"]) {
        char line[128];
        std::snprintf(line, sizeof line, "%6d  %-15s %5d  %5d  %s\n", d["degree"].get<int>(), d["verdict"].get<std::string>().c_str(),
            d["root_count"]["real_count"].get<int>(), d["root_count"]["nonreal_pairs"].get<int>(),
            d["root_count"]["certified"].get<bool>() ? "yes" : "no");
        os << line;
    }
}

int emit(const lpkit::cli::CommandOutcome& out, bool as_json, const std::string& out_file)
{
    const std::string text = out.document.dump(2);
    if (!out_file.empty()) {
        std::ofstream f(out_file);
        f << text << '\n';
    }
    if (as_json) {
        std::cout << text << '\n';
    } else if (out.document.contains("error")) {
        const json& e = out.document["error"];
        std::cerr << "error (" << e["kind"].get<std::string>() << "): " << e["message"].get<std::string>() << '\n';
    } else if (out.document["command"] == "ms-test") {
        print_ms_table(out.document["result"], std::cout);
    } else {
        flatten(out.document["result"], "", std::cout);
    }
    return out.exit_code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Multiplier-sequence and Laguerre-Polya toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    long precision = 256;
    bool as_json = false;
    std::string out_path;
    app.add_option("--precision", precision, "working precision in bits")->check(CLI::Range(32L, 1L << 20));
    app.add_flag("--json", as_json, "print the JSON document");
    app.add_option("--out", out_path, "write the JSON document to this file (corpus: output directory)");

    std::map<std::string, ArgSink> sinks;

    auto* ms = app.add_subcommand("ms-test", "Jensen-polynomial sweep for a sequence");
    auto& s_ms = sinks["ms-test"];
    s_ms.option<std::string>(ms, "--seq", "seq", "sequence spec")->required();
    s_ms.option<long>(ms, "--max-degree", "max_degree", "highest Jensen degree")->required();
    s_ms.flag(ms, "--exhaustive", "exhaustive", "continue past the first failure");
    s_ms.option<long>(ms, "--threads", "threads", "worker threads (0 = hardware)");
    s_ms.flag(ms, "--coefficients", "coefficients", "include Jensen coefficients");

    auto* jn = app.add_subcommand("jensen", "one Jensen polynomial with root classification");
    auto& s_jn = sinks["jensen"];
    s_jn.option<std::string>(jn, "--seq", "seq", "sequence spec")->required();
    s_jn.option<long>(jn, "--degree", "degree", "Jensen degree")->required();
    s_jn.option<long>(jn, "--terms", "terms", "also list the first N sequence terms");

    auto* ev = app.add_subcommand("eval", "special function values");
    auto& s_ev = sinks["eval"];
    s_ev.option<std::string>(ev, "--fn", "fn", "besselB|hardyE|Ip|phi|phi_prime|gamma|digamma|F|cosh_sqrt")->required();
    s_ev.option<std::string>(ev, "--method", "method", "series|integral");
    s_ev.option<double>(ev, "--tol", "tol", "quadrature tolerance");
    for (const char* k : {"s", "a", "x", "p", "step", "form"})
        s_ev.option<std::string>(ev, std::string("--") + k, k, std::string("parameter ") + k);
    s_ev.option<std::string>(ev, "--window-lo", "window_lo", "zero scan window start");
    s_ev.option<std::string>(ev, "--window-hi", "window_hi", "zero scan window end");
    s_ev.option<long>(ev, "--n-factors", "n_factors", "product factors for cosh_sqrt");
    s_ev.flag(ev, "--zero-scan", "zero_scan", "count real zeros of hardyE");

    auto* qd = app.add_subcommand("quad", "singular integral representations");
    auto& s_qd = sinks["quad"];
    s_qd.option<std::string>(qd, "--integral", "integral", "bessel_u|bessel_v|phi|phi_prime|nsg|lagarias|cauchy_saalschutz")->required();
    s_qd.option<double>(qd, "--tol", "tol", "target tolerance");
    s_qd.option<std::string>(qd, "--x", "x", "argument");
    s_qd.option<std::string>(qd, "--s", "s", "exponent");
    s_qd.option<long>(qd, "--n", "n", "integer parameter");
    s_qd.option<long>(qd, "--k", "k", "integer parameter");
    s_qd.option<long>(qd, "--max-level", "max_level", "maximum refinement level");

    auto* fm = app.add_subcommand("families", "B_k and C_k families");
    auto& s_fm = sinks["families"];
    s_fm.option<std::string>(fm, "--op", "op", "b|c|ck-represent|reversal|via-jensen|closed-form")->required();
    s_fm.option<std::string>(fm, "--seq", "seq", "sequence spec for ck-represent");
    s_fm.option<std::string>(fm, "--phi", "phi", "LP function");
    s_fm.option<std::string>(fm, "--Phi", "Phi", "second LP function");
    s_fm.option<std::string>(fm, "--t", "t", "parameter t");
    s_fm.option<std::string>(fm, "--s", "s", "parameter s");
    s_fm.option<long>(fm, "--k-max", "k_max", "largest k");
    s_fm.option<long>(fm, "--verify-through", "verify_through", "ck-represent verification depth");
    s_fm.option<double>(fm, "--tol", "tol", "tolerance for float closed forms");
    s_fm.flag(fm, "--ms-test", "ms_test", "run ms_test on the C_k sequence");

    auto* tp = app.add_subcommand("totpos", "Toeplitz minors of a sequence");
    auto& s_tp = sinks["totpos"];
    s_tp.flag(tp, "--problem40", "problem40", "the printed 4x4 matrix");
    auto* alpha = s_tp.option<std::vector<std::string>>(tp, "--alpha", "alpha", "explicit alpha_0,alpha_1,...");
    alpha->delimiter(',');
    s_tp.option<std::string>(tp, "--seq", "seq", "sequence spec");
    s_tp.option<long>(tp, "--N", "N", "window size");
    s_tp.option<long>(tp, "--max-order", "max_order", "largest minor order");
    s_tp.option<long>(tp, "--ms-degree", "ms_degree", "ms_test cross-check degree");
    s_tp.option<long>(tp, "--budget", "budget", "maximum number of minors");
    s_tp.flag(tp, "--no-factorial", "no_factorial", "use alpha_k = gamma_k");

    auto* cp = app.add_subcommand("corpus", "run the example corpus");
    std::string filter;
    unsigned threads = 0;
    bool list_only = false;
    cp->add_option("--filter", filter, "tag (section1..section5, problem40) or id prefix");
    cp->add_option("--threads", threads, "worker threads (0 = hardware)");
    cp->add_flag("--list", list_only, "list cases without running them");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return lpkit::cli::exit_usage;
    }

    if (cp->parsed()) {
        namespace corpus = lpkit::cli::corpus;
        std::vector<corpus::CorpusCase> selected;
        for (auto& c : corpus::all_cases())
            if (corpus::matches(c, filter))
                selected.push_back(std::move(c));
        if (list_only) {
            for (const auto& c : selected)
                std::cout << c.id << "  " << c.paper_anchor << '\n';
            return lpkit::cli::exit_ok;
        }
        if (selected.empty()) {
            std::cerr << "no corpus case matches '" << filter << "'\n";
            return lpkit::cli::exit_usage;
        }
        auto results = corpus::run(selected, threads);
        corpus::write(out_path.empty() ? "corpus_out" : out_path, selected, results);
        std::size_t counts[4] = {};
        for (const auto& r : results) {
            ++counts[static_cast<int>(r.status)];
            if (!as_json)
                std::printf("%-45s %-10s %9.1f ms  %s\n", r.id.c_str(), corpus::to_string(r.status), r.runtime_ms, r.detail.c_str());
        }
        if (as_json) {
            json summary = json::array();
            for (const auto& r : results)
                summary.push_back({{"case_id", r.id}, {"anchor", r.paper_anchor}, {"status", corpus::to_string(r.status)}});
            std::cout << json{{"schema_version", lpkit::report::schema_version}, {"command", "corpus"}, {"cases", summary}}.dump(2) << '\n';
        } else {
            std::printf("%zu cases: %zu pass, %zu documented, %zu fail, %zu error\n", results.size(), counts[0], counts[2], counts[1], counts[3]);
        }
        return corpus::all_ok(results) ? lpkit::cli::exit_ok : 1;
    }

    for (auto* sub : app.get_subcommands()) {
        json args = sinks.at(sub->get_name()).collect();
        args["precision"] = precision;
        return emit(lpkit::cli::run_command(sub->get_name(), args), as_json, out_path);
    }
    return lpkit::cli::exit_usage;
}
