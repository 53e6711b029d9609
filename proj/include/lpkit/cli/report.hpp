#pragma once

#include <cmath>
#include <string>

#include <json.hpp>

#include "lpkit/exactcore/certify.hpp"
#include "lpkit/exactcore/sturm.hpp"
#include "lpkit/families/families.hpp"
#include "lpkit/jensen/jensen.hpp"
#include "lpkit/quadlab/quadlab.hpp"
#include "lpkit/specfun/specfun.hpp"
#include "lpkit/tpseq/tpseq.hpp"

namespace lpkit::report {

using json = nlohmann::ordered_json;

inline constexpr const char* schema_version = "1";

/// Decimal digits that a `bits`-bit mantissa supports.
inline int digits_for(Bits bits) { return std::max(17, static_cast<int>(std::floor(static_cast<double>(bits) * 0.30103)) - 1); }

inline json rational(const BigRational& q) { return to_fraction_string(q); }

inline json real(const Real& x) { return x.to_string(digits_for(x.precision())); }

inline json ball(const HPFloat& x)
{
    return json{{"value", x.value.to_string(digits_for(x.precision_bits()))}, {"err", x.err.to_string(6)}};
}

inline json term(const seq::TermValue& t)
{
    if (t.exact)
        return json{{"exact", rational(*t.exact)}};
    return ball(t.approx);
}

inline json poly(const QPoly& p)
{
    json a = json::array();
    for (int i = 0; i <= p.degree(); ++i)
        a.push_back(rational(p[i]));
    return a;
}

inline json root_count(const roots::RootCount& c)
{
    return json{{"real_count", c.real_count}, {"nonreal_pairs", c.nonreal_pairs}, {"certified", c.certified},
        {"precision_bits", c.precision_bits}};
}

inline json disk(const roots::RootDisk& d)
{
    auto num = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    return json{{"re", num(d.center.real())}, {"im", num(d.center.imag())}, {"radius", num(d.radius)}, {"real", d.real}};
}

inline json interval(const roots::IsolatingInterval& iv)
{
    return json{{"lo", rational(iv.lo)}, {"hi", rational(iv.hi)}, {"multiplicity", iv.multiplicity}};
}

inline const char* domain_name(CoefficientDomain d) { return d == CoefficientDomain::exact_rational ? "exact-rational" : "floating"; }

inline json jensen_report(const jensen::JensenReport& r, bool with_coefficients = true)
{
    json j{{"degree", r.degree}, {"verdict", jensen::to_string(r.verdict)}, {"domain", domain_name(r.domain)},
        {"root_count", root_count(r.root_count)}, {"identically_zero", r.identically_zero}};
    if (with_coefficients) {
        json c = json::array();
        for (const auto& t : r.coefficients)
            c.push_back(term(t));
        j["coefficients"] = c;
    }
    if (!r.disks.empty()) {
        json d = json::array();
        for (const auto& x : r.disks)
            d.push_back(disk(x));
        j["root_disks"] = d;
    }
    if (!r.note.empty())
        j["note"] = r.note;
    return j;
}

inline json ms_report(const jensen::MsTestReport& r, bool with_coefficients = false)
{
    json per = json::array();
    for (const auto& d : r.per_degree)
        per.push_back(jensen_report(d, with_coefficients));
    return json{{"spec", r.spec}, {"max_degree", r.max_degree},
        {"first_failure", r.first_failure ? json(*r.first_failure) : json(nullptr)}, {"sign_pattern_ok", r.sign_pattern_ok},
        {"exhaustive", r.exhaustive}, {"uncertified_degrees", r.uncertified_degrees()}, {"per_degree", per}};
}

inline json series(const specfun::SeriesEval& s)
{
    return json{{"value", ball(s.value)}, {"terms_used", s.terms_used}, {"tail_bound", s.tail_bound.value.to_string(6)}};
}

inline json quad(const quad::QuadResult& q)
{
    return json{{"value", ball(q.value)}, {"abs_err_est", q.abs_err_est.value.to_string(6)}, {"nodes", q.nodes},
        {"levels", q.levels}, {"converged", q.converged}};
}

inline json zero_scan(const specfun::ZeroScan& z)
{
    return json{{"count", z.count}, {"zero_at_origin", z.zero_at_origin}, {"sign_changes", z.sign_changes}, {"nodes", z.nodes},
        {"precision_bits", z.precision_bits}, {"sign_at_left", z.sign_at_left}, {"expected_left_sign", z.expected_left_sign}};
}

inline json minors(const tp::MinorsReport& r)
{
    json j{{"ok", r.ok}, {"window", r.window}, {"max_order", r.max_order}, {"minors_checked", r.minors_checked},
        {"negative_count", r.negative_count}, {"uncertain_count", r.uncertain_count}, {"per_order", r.per_order}};
    if (r.witness)
        j["witness"] = json{{"rows", r.witness->rows}, {"cols", r.witness->cols}, {"determinant", term(r.witness->determinant)}};
    else
        j["witness"] = nullptr;
    return j;
}

inline json lp_function(const families::LPFunction& f) { return f.to_string(); }

inline json ck_witness(const families::CkWitness& w)
{
    return json{{"phi", lp_function(w.phi)}, {"Phi", lp_function(w.Phi)}, {"t", rational(w.t)}, {"s", rational(w.s)}};
}

/// Envelope shared by every command.
inline json envelope(const std::string& command, Bits precision, json result)
{
    return json{{"schema_version", schema_version}, {"command", command}, {"precision", precision}, {"result", std::move(result)}};
}

inline json error_envelope(const std::string& command, const std::string& kind, const std::string& message,
    std::optional<std::size_t> position = std::nullopt)
{
    json e{{"kind", kind}, {"message", message}};
    if (position)
        e["position"] = *position;
    return json{{"schema_version", schema_version}, {"command", command}, {"error", e}};
}

} // namespace lpkit::report
