"""Options language: grammar, merge semantics, canonical emission."""

import random
import struct

import pytest

from provrun import (
    Kind,
    OptionKey,
    OptionsSet,
    OptionValue,
    emit_canonical,
    merge,
    parse_options,
    parse_value,
    value_to_text,
)
from provrun.errors import InvalidOptionValue, OptionsSyntaxError

from helpers import random_finite_double, random_options_set


def bits(x: float) -> bytes:
    return struct.pack("<d", x)


# --- parsing ---------------------------------------------------------------

def test_parse_single_assignment():
    parsed = parse_options("ApplicationMgr.OutputLevel = 3")
    assert parsed["ApplicationMgr.OutputLevel"] == OptionValue.of(3)
    assert len(parsed) == 1


def test_parse_last_write_wins():
    parsed = parse_options("A.X = 1\nA.X = 2")
    assert parsed["A.X"] == OptionValue.of(2)
    assert len(parsed) == 1


def test_parse_float_list():
    parsed = parse_options("Filter.Thresholds = [0.5, 1.5]")
    value = parsed["Filter.Thresholds"]
    assert value.kind is Kind.LIST
    assert value.elem_kind is Kind.FLOAT
    assert value.python() == [0.5, 1.5]


def test_parse_comments_and_blank_lines():
    text = "# leading comment\n\n   \nA.B = true\n  # indented comment\n"
    parsed = parse_options(text)
    assert parsed["A.B"] == OptionValue.of(True)


def test_parse_empty_list_and_strings():
    parsed = parse_options('A.L = []\nA.S = "he said \\"hi\\""\nA.T = ""')
    assert parsed["A.L"].python() == []
    assert parsed["A.S"].python() == 'he said "hi"'
    assert parsed["A.T"].python() == ""


def test_parse_unicode_escapes():
    parsed = parse_options('A.S = "tab\\tnl\\ncr\\r\\u0041\\u00e4"')
    assert parsed["A.S"].python() == "tab\tnl\ncr\rAä"


def test_parse_surrogate_pair_escape():
    parsed = parse_options('A.S = "\\ud83d\\ude00"')
    assert parsed["A.S"].python() == "\U0001f600"


def test_parse_negative_numbers_and_exponents():
    parsed = parse_options("A.I = -42\nA.F = -1.5e-3\nA.G = 2e16\nA.H = 1e-05")
    assert parsed["A.I"].python() == -42
    assert parsed["A.F"].python() == -1.5e-3
    assert parsed["A.G"].kind is Kind.FLOAT
    assert parsed["A.H"].python() == 1e-05


@pytest.mark.parametrize("bad, fragment", [
    ("A = 1", "malformed key"),
    ("A.B == 1", "expected a value"),
    ("A.B = 01", "leading zeros"),
    ("A.B = 1e999", "finite"),
    ("A.B = [1, 2.5]", "heterogeneous"),
    ("A.B = [[1]]", "nested"),
    ('A.B = "open', "unterminated"),
    ("A.B = tru", "unparseable"),
    ("A.B = 1 trailing", "unexpected text"),
    ("A.B = 1\r", "carriage return"),
    ("9A.B = 1", "malformed key"),
    ("A.B = .5", "expected a value"),
    ("A.B = 5.", "digits after"),
    ('A.B = "\\q"', "unknown escape"),
    ('A.B = "\\ud800"', "lone surrogate"),
    ("A.B = 99999999999999999999", "64-bit"),
    ("A.B = ٣", "expected a value"),     # non-ASCII digit
    ("A.B = 1٣1", "unexpected text"),    # non-ASCII digit inside a number
])
def test_parse_errors(bad, fragment):
    with pytest.raises(OptionsSyntaxError) as err:
        parse_options(bad)
    assert fragment in str(err.value)


def test_parse_error_carries_position():
    with pytest.raises(OptionsSyntaxError) as err:
        parse_options("A.B = 1\nC.D = ?\n")
    assert err.value.line == 2
    assert err.value.column == 7


def test_final_line_without_newline_is_accepted():
    assert parse_options("A.B = 7")["A.B"] == OptionValue.of(7)


# --- merge -----------------------------------------------------------------

def test_merge_identities():
    s = parse_options("A.X = 1\nB.Y = true")
    empty = OptionsSet()
    assert merge(empty, s) == s
    assert merge(s, empty) == s


def test_merge_overlay_wins():
    base = parse_options("A.X = 1")
    overlay = parse_options("A.X = 2\nB.Y = true")
    merged = merge(base, overlay)
    assert merged["A.X"] == OptionValue.of(2)
    assert merged["B.Y"] == OptionValue.of(True)
    assert len(merged) == 2


def test_merge_associative_on_disjoint_keys():
    rnd = random.Random(7)
    for _ in range(25):
        sets = []
        used = set()
        for _ in range(3):
            s = OptionsSet()
            for _ in range(rnd.randrange(6)):
                key = f"C{rnd.randrange(1000)}.P{rnd.randrange(1000)}"
                if key in used:
                    continue
                used.add(key)
                s.set(key, rnd.randrange(100))
            sets.append(s)
        a, b, c = sets
        assert merge(merge(a, b), c) == merge(a, merge(b, c))


def test_equality_ignores_insertion_order():
    s1 = OptionsSet([("A.X", 1), ("B.Y", 2)])
    s2 = OptionsSet([("B.Y", 2), ("A.X", 1)])
    assert s1 == s2
    assert emit_canonical(s1) == emit_canonical(s2)


# --- canonical emission -----------------------------------------------------

def test_emit_sorts_keys():
    s = OptionsSet([("B.Y", True), ("A.X", 1)])
    assert emit_canonical(s) == "A.X = 1\nB.Y = true\n"


def test_emit_empty_set():
    assert emit_canonical(OptionsSet()) == ""


def test_emit_sorts_by_key_bytes_not_segments():
    # '.' sorts below identifier characters, so A.B.x comes before AB.x
    s = OptionsSet([("AB.x", 1), ("A.B.x", 2)])
    assert emit_canonical(s) == "A.B.x = 2\nAB.x = 1\n"


def shortest_roundtrip_digits(x: float) -> int:
    """Independent formatter oracle: fewest significant digits that survive."""
    for n in range(1, 18):
        if bits(float("%.{}g".format(n) % x)) == bits(x):
            return n
    raise AssertionError("17 digits must always round-trip")


def significant_digits(text: str) -> int:
    mantissa = text.lstrip("-").split("e")[0].split("E")[0].replace(".", "")
    core = mantissa.strip("0")
    return len(core) if core else 1


def test_float_emission_is_shortest_roundtrip():
    assert value_to_text(OptionValue.of(0.5)) == "0.5"
    assert emit_canonical(OptionsSet([("A.F", 0.5)])) == "A.F = 0.5\n"
    rnd = random.Random(11)
    samples = [0.5, 0.1, 2.0, 1000.0, 1e16, 1e-5, -0.0, 5e-324, 1.5e300]
    samples += [random_finite_double(rnd) for _ in range(200)]
    for x in samples:
        text = value_to_text(OptionValue.of(x))
        assert bits(parse_value(text).value) == bits(x)
        assert significant_digits(text) == shortest_roundtrip_digits(x)


def test_scalar_codec_examples():
    assert value_to_text(OptionValue.of(False)) == "false"
    assert value_to_text(OptionValue.of('he said "hi"')) == '"he said \\"hi\\""'
    assert parse_value('"he said \\"hi\\""').python() == 'he said "hi"'


def test_float_roundtrip_is_bit_exact():
    rnd = random.Random(2024)
    for _ in range(1000):
        x = random_finite_double(rnd)
        text = value_to_text(OptionValue.of(x))
        assert bits(parse_value(text).value) == bits(x)


def test_control_characters_escape_and_return():
    value = OptionValue.of("a\x00b\x1fc")
    text = value_to_text(value)
    assert text == '"a\\u0000b\\u001fc"'
    assert parse_value(text) == value


def test_negative_zero_is_distinct_and_roundtrips():
    pos = OptionValue.of(0.0)
    neg = OptionValue.of(-0.0)
    assert pos != neg
    assert value_to_text(neg) == "-0.0"
    assert bits(parse_value("-0.0").value) == bits(-0.0)


# --- whole-set properties ----------------------------------------------------

def test_roundtrip_and_fixpoint_randomized():
    rnd = random.Random(99)
    for _ in range(150):
        s = random_options_set(rnd, max_keys=20)
        emitted = emit_canonical(s)
        reparsed = parse_options(emitted)
        assert reparsed == s
        assert emit_canonical(reparsed) == emitted


def test_value_constructor_rejects_bad_values():
    with pytest.raises(InvalidOptionValue):
        OptionValue.of(float("nan"))
    with pytest.raises(InvalidOptionValue):
        OptionValue.of(float("inf"))
    with pytest.raises(InvalidOptionValue):
        OptionValue.of(1 << 63)
    with pytest.raises(InvalidOptionValue):
        OptionValue.of([1, "two"])
    with pytest.raises(InvalidOptionValue):
        OptionValue.of([[1]])
    with pytest.raises(InvalidOptionValue):
        OptionKey("A", "")
    with pytest.raises(InvalidOptionValue):
        OptionKey("A", "9bad")


def test_lists_are_homogeneous_but_integer_and_float_distinct():
    ints = OptionValue.of([1, 2])
    floats = OptionValue.of([1.0, 2.0])
    assert ints.elem_kind is Kind.INTEGER
    assert floats.elem_kind is Kind.FLOAT
    assert ints != floats
