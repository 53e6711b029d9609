"""Writes the JSON schemas for lpkit output. Run from the repository root."""
import json
import pathlib

DRAFT = "https://json-schema.org/draft/2020-12/schema"
RAT = {"$ref": "#/$defs/rational"}
DEC = {"$ref": "#/$defs/decimal"}
BALL = {"$ref": "#/$defs/ball"}
INT = {"type": "integer"}
BOOL = {"type": "boolean"}
STR = {"type": "string"}


def obj(required, optional=None, extra=False):
    props = dict(required)
    props.update(optional or {})
    return {"type": "object", "required": sorted(required), "properties": props, "additionalProperties": extra}


def arr(item):
    return {"type": "array", "items": item}


def case(key, value, schema):
    return {"if": {"properties": {key: {"const": value}}, "required": [key]}, "then": schema}


defs = {
    "rational": {"type": "string", "pattern": r"^-?[0-9]+/[0-9]+$"},
    "decimal": {"type": "string", "pattern": r"^-?(inf|nan|[0-9]+(\.[0-9]+)?([eE][-+]?[0-9]+)?|[0-9]*\.[0-9]+([eE][-+]?[0-9]+)?)$"},
    "ball": obj({"value": DEC, "err": DEC}),
    "term": {"oneOf": [obj({"exact": RAT}), BALL]},
    "root_count": obj({"real_count": INT, "nonreal_pairs": INT, "certified": BOOL, "precision_bits": INT}),
    "disk": obj({"re": DEC, "im": DEC, "radius": DEC, "real": BOOL}),
    "interval": obj({"lo": RAT, "hi": RAT, "multiplicity": INT}),
    "jensen_report": obj(
        {"degree": INT, "verdict": {"enum": ["all-real", "nonreal-found", "uncertified"]},
         "domain": {"enum": ["exact-rational", "floating"]}, "root_count": {"$ref": "#/$defs/root_count"},
         "identically_zero": BOOL},
        {"coefficients": arr({"$ref": "#/$defs/term"}), "root_disks": arr({"$ref": "#/$defs/disk"}), "note": STR}),
    "ms_report": obj({"spec": STR, "max_degree": INT, "first_failure": {"type": ["integer", "null"]}, "sign_pattern_ok": BOOL,
                      "exhaustive": BOOL, "uncertified_degrees": arr(INT), "per_degree": arr({"$ref": "#/$defs/jensen_report"})}),
    "series": obj({"value": BALL, "terms_used": INT, "tail_bound": DEC}),
    "quad": obj({"value": BALL, "abs_err_est": DEC, "nodes": INT, "levels": INT, "converged": BOOL}),
    "zero_scan": obj({"count": INT, "zero_at_origin": BOOL, "sign_changes": INT, "nodes": INT, "precision_bits": INT,
                      "sign_at_left": INT, "expected_left_sign": INT}),
    "witness": obj({"phi": STR, "Phi": STR, "t": RAT, "s": RAT}),
    "minors": obj({"ok": BOOL, "window": INT, "max_order": INT, "minors_checked": INT, "negative_count": INT,
                   "uncertain_count": INT, "per_order": arr(INT),
                   "witness": {"oneOf": [{"type": "null"}, obj({"rows": arr(INT), "cols": arr(INT), "determinant": {"$ref": "#/$defs/term"}})]}}),
}

jensen_result = obj(
    dict(defs["jensen_report"]["properties"], spec=STR),
    {"terms": arr({"$ref": "#/$defs/term"}), "real_root_intervals": arr({"$ref": "#/$defs/interval"}),
     "coefficients": arr({"$ref": "#/$defs/term"}), "root_disks": arr({"$ref": "#/$defs/disk"}), "note": STR})
jensen_result["required"] = sorted(["degree", "verdict", "domain", "root_count", "identically_zero", "spec", "coefficients"])

ref = {"reference": BALL, "abs_diff": DEC}
eval_base = {"fn": STR, "method": {"enum": ["series", "integral"]}}
eval_result = {
    "type": "object",
    "required": ["fn", "method"],
    "allOf": [
        case("fn", "hardyE", obj(dict(eval_base, s=RAT, a=RAT), {"x": RAT, "series": {"$ref": "#/$defs/series"},
                                                                 "zero_scan": {"$ref": "#/$defs/zero_scan"}})),
        case("fn", "Ip", obj(dict(eval_base, p=RAT, x=RAT, series={"$ref": "#/$defs/series"}), ref)),
        case("fn", "gamma", obj(dict(eval_base, x=RAT, value=BALL))),
        case("fn", "digamma", obj(dict(eval_base, x=RAT, value=BALL))),
        case("fn", "F", obj(dict(eval_base, x=RAT, series=BALL, closed_forms={
            "type": "object", "additionalProperties": obj({"value": BALL, "matches": BOOL})}))),
        case("fn", "cosh_sqrt", obj(dict(eval_base, x=RAT, series={"$ref": "#/$defs/series"}, abs_diff=DEC, product=obj(
            {"value": BALL, "factors": INT, "remainder_estimate": {"type": "number"}})))),
        case("fn", "besselB", obj(dict(eval_base, x=RAT, s=RAT), dict(ref, series={"$ref": "#/$defs/series"}, form={"enum": ["u", "v"]},
                                                                       integral={"$ref": "#/$defs/quad"}))),
        case("fn", "phi", obj(dict(eval_base, x=RAT), dict(ref, series=BALL, integral={"$ref": "#/$defs/quad"}))),
        case("fn", "phi_prime", obj(dict(eval_base, x=RAT), dict(ref, series=BALL, integral={"$ref": "#/$defs/quad"}))),
    ],
}

quad_base = dict({"integral": STR, "tol": {"type": "number"}, "result": {"$ref": "#/$defs/quad"}}, **ref)
quad_result = {
    "type": "object",
    "required": ["integral", "tol", "result", "reference", "abs_diff"],
    "allOf": [case("integral", name, obj(dict(quad_base, **extra))) for name, extra in [
        ("bessel_u", {"x": RAT}), ("bessel_v", {"x": RAT}), ("phi", {"x": RAT}), ("phi_prime", {"x": RAT}),
        ("nsg", {"n": INT, "s": RAT}), ("lagarias", {"k": INT}), ("cauchy_saalschutz", {"s": RAT})]],
}

fam_param = {"op": STR, "phi": STR, "t": RAT}
families_result = {
    "type": "object",
    "required": ["op"],
    "allOf": [
        case("op", "ck-represent", obj({"op": STR, "seq": STR, "witness": {"$ref": "#/$defs/witness"},
                                        "alternative": {"oneOf": [{"type": "null"}, {"$ref": "#/$defs/witness"}]},
                                        "verified_through": INT}, {"phi_polynomial": arr(RAT)})),
        case("op", "b", obj(dict(fam_param, values=arr(RAT), polynomial_in_t=arr(RAT)))),
        case("op", "reversal", obj(dict(fam_param, per_k=arr(BOOL), all_pass=BOOL))),
        case("op", "via-jensen", obj(dict(fam_param, per_k=arr(BOOL), all_pass=BOOL))),
        case("op", "c", obj(dict(fam_param, Phi=STR, s=RAT, values=arr(RAT)), {"ms_test": {"$ref": "#/$defs/ms_report"}})),
        case("op", "closed-form", obj(dict(fam_param, Phi=STR, s=RAT, all_match=BOOL, rows=arr(obj(
            {"k": INT, "c_family": RAT, "closed_form": {"oneOf": [RAT, BALL]}, "match": BOOL}))))),
    ],
}

totpos_result = {"oneOf": [
    obj({"matrix": arr(arr(RAT)), "rows": arr(INT), "cols": arr(INT), "determinant": RAT}),
    obj({"alpha": arr(RAT), "minors": {"$ref": "#/$defs/minors"}}),
    obj({"seq": STR, "divided_by_factorial": BOOL, "minors": {"$ref": "#/$defs/minors"}, "noteworthy": BOOL, "note": STR,
         "ms_test": obj({"first_failure": {"type": ["integer", "null"]}, "max_degree": INT, "uncertified_degrees": arr(INT)})}),
]}

commands = {"ms-test": {"$ref": "#/$defs/ms_report"}, "jensen": jensen_result, "eval": eval_result, "quad": quad_result,
            "families": families_result, "totpos": totpos_result}

success = obj({"schema_version": {"const": "1"}, "command": {"enum": list(commands)}, "precision": INT, "result": {}})
success["allOf"] = [{"if": {"properties": {"command": {"const": name}}},
                     "then": {"properties": {"result": schema}}} for name, schema in commands.items()]
error = obj({"schema_version": {"const": "1"}, "command": STR,
             "error": obj({"kind": {"enum": ["parse", "usage", "domain", "budget", "inconclusive", "uncertifiable", "internal"]},
                           "message": STR}, {"position": INT})})

output = {"$schema": DRAFT, "$id": "lpkit-output.schema.json", "title": "lpkit command output",
          "oneOf": [success, error], "$defs": defs}

corpus_case = {"$schema": DRAFT, "$id": "lpkit-corpus-case.schema.json", "title": "lpkit corpus case record",
               **obj({"schema_version": {"const": "1"}, "id": {"type": "string", "pattern": "^s[1-5]-"},
                      "paper_anchor": {"type": "string", "pattern": "^section[1-5]: \".+\"$"},
                      "tags": {"type": "array", "items": STR, "minItems": 1, "contains": {"pattern": "^section[1-5]$"}},
                      "invocation": obj({"command": {"enum": list(commands)}, "args": {"type": "object"}}),
                      "expected": {"type": "object"}, "status": {"enum": ["pass", "fail", "documented", "error"]},
                      "detail": STR, "exit_code": INT, "output": {"$ref": "lpkit-output.schema.json"}})}

here = pathlib.Path(__file__).parent
(here / "lpkit-output.schema.json").write_text(json.dumps(output, indent=2) + "\n")
(here / "lpkit-corpus-case.schema.json").write_text(json.dumps(corpus_case, indent=2) + "\n")
