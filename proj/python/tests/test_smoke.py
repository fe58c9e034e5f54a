import textwrap

import pytest

import complang

SCHEMA = textwrap.dedent(
    """
    table users {
      id: Integer,
      username: String,
      staged: %bool
    }

    table emails {
      id: Integer,
      email: String,
      user_id: Integer
    }

    assoc users -> emails

    row users { id = 1, username = "ada", staged = false }
    row users { id = 2, username = "grace", staged = true }
    row emails { id = 1, email = "ada@example.com", user_id = 1 }
    """
)


def program(body):
    return "class Main\n\ndef Main.main(u) : (Nil) -> Object =\n  " + body + "\n"


def test_check_inserts_a_guard_on_comp_calls():
    r = complang.check(program("1.plus(1)"))
    assert r["ok"]
    assert r["status"] == "ok"
    assert "check[Sing(2)] 1.plus(1)" in r["rewritten"]


def test_check_reports_diagnostics_with_positions():
    r = complang.check(program('1.plus("x")'))
    assert not r["ok"]
    assert r["status"] == "type_error"
    (d,) = r["diagnostics"]
    assert d["code"] == "TYP001"
    assert d["line"] == 4
    assert "Sing(2)" not in d["message"]


def test_run_returns_value_and_runtime_type():
    r = complang.run(program("[1, 2, 3].map() { |v| v.times(v) }.fetchAt(2)"))
    assert r["status"] == "ok"
    assert r["value"] == "9"
    assert r["type"] == "Sing(9)"


def test_run_blames_nil_receivers():
    r = complang.run(program("[1].fetchAt(5).plus(1)"))
    assert r["status"] == "blame"
    assert r["blame"]["kind"] in ("NilReceiver", "TypeLevelError")
    assert "plus" in r["blame"]["message"]


def test_run_reports_fuel_exhaustion():
    r = complang.run(program("while true do nil end"), fuel=50)
    assert r["status"] == "fuel"
    assert r["steps"] == 50


def test_schema_queries_type_and_run():
    src = program("(new Schema).table(:users).exists?({username: \"ada\"})")
    r = complang.run(src, schema=SCHEMA)
    assert r["status"] == "ok"
    assert r["value"] == "true"


def test_check_sql_rejects_wrongly_typed_placeholder():
    r = complang.check_sql(SCHEMA, "username = ?", ["Integer"])
    assert not r["ok"]
    assert [e["code"] for e in r["errors"]] == ["SQL003"]
    assert "[Integer]" in r["artificial"]


def test_check_sql_accepts_matching_placeholder():
    r = complang.check_sql(SCHEMA, "username = ? AND staged = ?", ["String", "%bool"])
    assert r["ok"]
    assert r["errors"] == []


def test_type_helpers():
    assert complang.normalize_type("Sing(3)") == "Sing(3)"
    assert complang.is_subtype("Sing(3)", "Integer")
    assert not complang.is_subtype("Integer", "Sing(3)")
    assert complang.is_subtype("Nil", "[Integer, String]")
    assert complang.join_types("True", "False") == "%bool"
    assert complang.join_types("Sing(1)", "String") == "Sing(1) or String"


def test_bad_type_spelling_raises():
    with pytest.raises(ValueError):
        complang.normalize_type("Sing(")
