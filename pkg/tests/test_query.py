import pytest
from hypothesis import given, strategies as st

from airsent.airlines import Airline, default_query_string
from airsent.query import (And, LangFilter, Mention, Not, Or, Query,
                           QuerySyntaxError, RetweetExclusion, Term, matches,
                           parse_query, render)
from tests.conftest import make_record


def test_single_term():
    assert parse_query("united").root == Term("united")


def test_example_query_grouping():
    # adjacency binds tighter than OR, so the filters scope to the right branch
    q = parse_query("@united OR united airlines lang:en -is-retweet")
    assert q.root == Or((
        Mention("united"),
        And((Term("united"), Term("airlines"), LangFilter("en"), RetweetExclusion())),
    ))


def test_is_colon_retweet_spelling():
    q = parse_query("a -is:retweet")
    assert q.root == And((Term("a"), RetweetExclusion()))


def test_dangling_or_is_syntax_error():
    with pytest.raises(QuerySyntaxError):
        parse_query("a OR")


def test_error_carries_byte_offset():
    with pytest.raises(QuerySyntaxError) as exc:
        parse_query("a (b OR c")
    assert exc.value.offset == 2
    with pytest.raises(QuerySyntaxError) as exc:
        parse_query("a b)")
    assert exc.value.offset == 3


def test_empty_query_rejected():
    for source in ("", "   "):
        with pytest.raises(QuerySyntaxError):
            parse_query(source)


def test_keywords_case_insensitive():
    assert parse_query("a or b").root == parse_query("a OR b").root
    assert parse_query("not a").root == Not(Term("a"))
    assert parse_query("a and b").root == And((Term("a"), Term("b")))


def test_minus_prefix_is_not():
    assert parse_query("a -b").root == And((Term("a"), Not(Term("b"))))


def test_parentheses_override_precedence():
    q = parse_query("(a OR b) c")
    assert q.root == And((Or((Term("a"), Term("b"))), Term("c")))


def test_term_lowercased():
    assert parse_query("UNITED").root == Term("united")


# -- render --------------------------------------------------------------

RENDER_SOURCES = [
    "united",
    "@united OR united airlines lang:en -is:retweet",
    "(a OR b) c",
    "a -b",
    "NOT (a b)",
    "a OR b OR c",
    "a b c",
    "-is:retweet",
    "lang:en",
    "(@delta OR delta airlines) lang:en -is:retweet",
] + [default_query_string(a) for a in Airline]


@pytest.mark.parametrize("source", RENDER_SOURCES)
def test_render_parse_fixed_point(source):
    q1 = parse_query(source)
    printed = render(q1)
    q2 = parse_query(printed)
    assert q2.root == q1.root
    assert render(q2) == printed


_leaf = st.one_of(
    st.from_regex(r"[a-z][a-z0-9]{0,5}", fullmatch=True)
    .filter(lambda w: w.upper() not in ("AND", "OR", "NOT"))
    .map(Term),
    st.from_regex(r"[a-z][a-z0-9]{0,5}", fullmatch=True).map(Mention),
    st.sampled_from(["en", "es", "fr"]).map(LangFilter),
    st.just(RetweetExclusion()),
)
_tree = st.recursive(
    _leaf,
    lambda children: st.one_of(
        children.map(Not),
        st.lists(children, min_size=2, max_size=3).map(lambda cs: And(tuple(cs))),
        st.lists(children, min_size=2, max_size=3).map(lambda cs: Or(tuple(cs))),
    ),
    max_leaves=8,
)


@given(_tree)
def test_render_round_trips_arbitrary_trees(root):
    printed = render(Query(root=root))
    reparsed = parse_query(printed)
    assert render(reparsed) == printed


# -- matching ------------------------------------------------------------

def test_term_whole_token_case_insensitive():
    q = parse_query("united")
    assert matches(q, make_record(text="United is great"))
    assert matches(q, make_record(text="flying united!"))
    assert not matches(q, make_record(text="reunited at last"))


def test_mention_requires_exact_handle():
    q = parse_query("@united")
    assert matches(q, make_record(text="hey @united fix this"))
    assert not matches(q, make_record(text="hey @unitedair fix this"))


def test_example_query_matches_name_phrase():
    q = parse_query("@united OR united airlines lang:en -is-retweet")
    rec = make_record(text="flying united airlines", lang="en", is_retweet=False)
    assert matches(q, rec)


def test_example_query_mention_branch_ignores_filters():
    # the filters scope to the OR's right branch, so a retweet that
    # mentions the handle still matches
    q = parse_query("@united OR united airlines lang:en -is-retweet")
    assert matches(q, make_record(text="@united hi", is_retweet=True))


def test_parenthesized_default_query_applies_filters_globally():
    q = parse_query(default_query_string(Airline.UNITED))
    assert not matches(q, make_record(text="@united hi", is_retweet=True))
    assert not matches(q, make_record(text="@united hola", lang="es"))
    assert matches(q, make_record(text="@united hi"))


def test_lang_filter_and_retweet_exclusion():
    assert matches(parse_query("lang:en"), make_record(lang="EN"))
    assert not matches(parse_query("lang:en"), make_record(lang="es"))
    assert matches(parse_query("-is:retweet"), make_record(is_retweet=False))
    assert not matches(parse_query("-is:retweet"), make_record(is_retweet=True))


def test_not_and_or_semantics():
    rec = make_record(text="delta gate agent")
    assert matches(parse_query("delta -united"), rec)
    assert not matches(parse_query("delta united"), rec)
    assert matches(parse_query("united OR gate"), rec)


@given(st.text(max_size=200))
def test_matches_total_over_arbitrary_text(text):
    q = parse_query(default_query_string(Airline.UNITED))
    result = matches(q, make_record(text=text))
    assert isinstance(result, bool)
