import json
from fractions import Fraction

import jsonschema
import pytest
from hypothesis import given, strategies as st

from frey_sunit import errors
from frey_sunit.qfield import QQ, AlgebraicNumber, make_field
from frey_sunit.report import (
    CACHE_ENV,
    ResultCache,
    RunConfig,
    cache_key,
    cached_run,
    decode_element,
    encode,
    envelope,
    load_schema,
    parse_element,
    parse_rational,
)


@given(st.fractions())
def test_rational_roundtrip(x):
    s = encode(x)
    assert isinstance(s, str) and parse_rational(s) == x


@given(st.sampled_from([5, -5, 2, -1, 13]), st.fractions(max_denominator=50), st.fractions(max_denominator=50))
def test_element_roundtrip(d, a, b):
    K = make_field(d)
    x = AlgebraicNumber(K, a, b)
    assert decode_element(json.loads(json.dumps(encode(x))), K) == x


def test_encode_shapes():
    assert encode(Fraction(20346417, 289)) == "20346417/289"
    assert encode(1728) == "1728"
    assert encode(AlgebraicNumber(QQ, Fraction(-1, 2))) == "-1/2"
    e = encode(AlgebraicNumber(make_field(5), Fraction(1, 2), Fraction(1, 2)))
    assert e["coords"] == ["0", "1"] and e["d"] == 5


def test_decode_field_mismatch():
    e = encode(AlgebraicNumber(make_field(5), 0, 1))
    with pytest.raises(errors.FieldMismatch):
        decode_element(e, make_field(2))


@pytest.mark.parametrize("text", ["1/0x", "a", "1.5", ""])
def test_bad_rationals(text):
    with pytest.raises(errors.InvalidInput):
        parse_rational(text)


def test_parse_element():
    K = make_field(5)
    assert parse_element("3:1", K) == AlgebraicNumber.from_coords(K, 3, 1)
    assert parse_element("-7/2", QQ) == AlgebraicNumber(QQ, Fraction(-7, 2))
    with pytest.raises(errors.InvalidInput):
        parse_element("1:1", QQ)
    with pytest.raises(errors.InvalidInput):
        parse_element("1:2:3", K)


def test_config_validation(tmp_path):
    assert RunConfig().exponent_bound == 10
    with pytest.raises(errors.InvalidInput):
        RunConfig(exponent_bound=0)
    with pytest.raises(errors.InvalidInput):
        RunConfig(output_format="xml")
    with pytest.raises(errors.InvalidInput):
        RunConfig.from_mapping({"bogus": 1})
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"exponent_bound": 4, "output_format": "text"}))
    cfg = RunConfig.from_file(str(p))
    assert (cfg.exponent_bound, cfg.output_format) == (4, "text")
    p.write_text("[1]")
    with pytest.raises(errors.InvalidInput):
        RunConfig.from_file(str(p))


def test_cache_key_ignores_presentation():
    a = RunConfig(output_format="json", cache_path="/x")
    b = RunConfig(output_format="csv")
    assert cache_key("f", {"d": 5}, a) == cache_key("f", {"d": 5}, b)
    assert cache_key("f", {"d": 5}, a) != cache_key("f", {"d": 5}, RunConfig(exponent_bound=3))
    assert cache_key("f", {"d": 5}, a) != cache_key("f", {"d": 6}, a)


def test_cache_roundtrip(tmp_path):
    cfg = RunConfig(cache_path=str(tmp_path / "cache.jsonl"))
    calls = []

    def compute():
        calls.append(1)
        return {"kind": "field", "x": Fraction(1, 3).__str__()}, ["note"]

    first = cached_run("field", {"d": 5}, cfg, compute)
    second = cached_run("field", {"d": 5}, cfg, compute)
    assert first[:2] == second[:2] and (first[2], second[2]) == (False, True)
    assert len(calls) == 1
    uncached = cached_run("field", {"d": 5}, cfg, compute, use_cache=False)
    assert uncached[:2] == first[:2] and len(calls) == 2


def test_cache_tolerates_torn_lines(tmp_path):
    path = tmp_path / "cache.jsonl"
    c = ResultCache(str(path))
    c.put("k", "cmd", {}, {"kind": "x"})
    with open(path, "a") as fh:
        fh.write('{"key": "k", "payl')
    assert c.get("k")["payload"] == {"kind": "x"}
    assert c.get("missing") is None


def test_env_var_sets_cache(monkeypatch, tmp_path):
    monkeypatch.setenv(CACHE_ENV, str(tmp_path / "env.jsonl"))
    assert RunConfig().resolved_cache_path() == str(tmp_path / "env.jsonl")
    assert RunConfig(cache_path="/explicit").resolved_cache_path() == "/explicit"


def test_envelope_schema():
    env = envelope("density", RunConfig(), {"kind": "density", "cutoff": 8, "total": 1, "counts": {},
                                            "fractions": {}, "projected": "1", "projected_prime": "1",
                                            "table": []}, ["n"], timestamp="t")
    jsonschema.validate(env, load_schema())
    with pytest.raises(ValueError):
        envelope("x", RunConfig(), {})
