from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from impcomp.errors import ParseError
from impcomp.workspace import WorkspaceError, emit, parse_workspace

WS = Path(__file__).resolve().parent.parent / "workspaces"

B2 = """[algebra B2]
elements: 0 1
order: 0 <= 1
imp: heyting
separator: generators 1
"""


def test_minimal_b2_loads():
    assert len(B2.strip().splitlines()) <= 6
    ws = parse_workspace(texts=[B2])
    assert list(ws.algebras) == ["B2"]


def test_h_only_separator_fails():
    text = B2.replace("B2", "H3").replace("0 1", "0 h 1").replace("0 <= 1", "0 <= h, h <= 1")
    text = text.replace("generators 1", "h")
    with pytest.raises(WorkspaceError) as e:
        parse_workspace(texts=[text])
    assert "upward-closure" in e.value.problems[0]


def test_no_validate_escape_hatch():
    text = B2.replace("generators 1", "members 0")
    with pytest.raises(WorkspaceError):
        parse_workspace(texts=[text])
    ws = parse_workspace(texts=[text], validate=False)
    assert ws.algebras["B2"].separator.members == {0}


@pytest.mark.parametrize("path", sorted(WS.glob("*.ws")), ids=lambda p: p.name)
def test_round_trip(path):
    ws = parse_workspace([path])
    text = emit(ws)
    again = parse_workspace(texts=[text])
    assert again == ws and emit(again) == text


def test_round_trip_of_table_algebras(corpus):
    from impcomp.workspace import Workspace
    for name in corpus.NAMES:
        ws = Workspace()
        ws.algebras[name] = corpus.get(name)
        text = emit(ws)
        back = parse_workspace(texts=[text]).algebras[name]
        assert (back.imp == corpus.get(name).imp).all()
        assert back.separator.members == corpus.get(name).separator.members


def test_parse_error_location():
    with pytest.raises(ParseError) as e:
        parse_workspace(texts=[B2 + "bogus line\n"])
    assert e.value.line == 6
    with pytest.raises(ParseError) as e:
        parse_workspace(texts=["[widget W]\n"])
    assert e.value.line == 1


def test_term_parse_error_is_located():
    with pytest.raises(WorkspaceError) as e:
        parse_workspace(texts=[B2 + "[term t]\nlam . x\n"])
    assert "7:5" in e.value.problems[0]


def test_dangling_references_are_itemised():
    text = B2 + """
[assembly X over B3]
carrier: a
exist: a = 1

[morphism f : X -> Y]
map: a -> b
"""
    with pytest.raises(WorkspaceError) as e:
        parse_workspace(texts=[text])
    assert len(e.value.problems) == 2
    assert "unknown algebra 'B3'" in e.value.problems[0]


def test_duplicate_names():
    with pytest.raises(WorkspaceError) as e:
        parse_workspace(texts=[B2, B2])
    assert "duplicate name" in e.value.problems[0]


def test_invalid_objects_rejected():
    bad_set = B2 + """
[implicative-set E over B2]
carrier: x y
eq: (x,x) = 1, (x,y) = 1, (y,x) = 0, (y,y) = 1
"""
    with pytest.raises(WorkspaceError) as e:
        parse_workspace(texts=[bad_set])
    assert "Sym" in e.value.problems[0]


@given(st.lists(st.from_regex(r"[a-z][a-z0-9]{0,3}", fullmatch=True), min_size=1, max_size=4, unique=True))
def test_assembly_round_trip(names):
    body = "\n  ".join(f"{x} = 1" for x in names)
    text = B2 + f"[assembly X over B2]\ncarrier: {' '.join(names)}\nexist:\n  {body}\n"
    ws = parse_workspace(texts=[text])
    assert parse_workspace(texts=[emit(ws)]) == ws
