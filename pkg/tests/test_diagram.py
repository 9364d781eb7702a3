"""Diagram construction, predicates, codes, and their invariants."""

import pytest
from hypothesis import given, strategies as st

from ssdlat import (
    Crossing,
    NodeRef,
    NotBoundedPoset,
    ParseError,
    add_bottom,
    build,
    chain,
    insert_blocked,
    insert_left_corner,
    parse_code,
    render_code,
)


@st.composite
def diagrams(draw, max_ops=10):
    """Random valid diagrams, grown by the two generation surgeries."""
    ops = draw(st.lists(st.booleans(), max_size=max_ops))
    d = chain(1)
    for insert in ops:
        if insert and not insert_blocked(d):
            d = insert_left_corner(d)
        else:
            d = add_bottom(d)
    return d


class TestBuild:
    def test_square(self, square):
        assert square.n == 4
        assert square.length == 2

    def test_m3_accepted(self, m3):
        assert m3.n == 5

    def test_crossing_rejected(self):
        with pytest.raises(Crossing):
            build(
                [1, 2, 2, 1],
                {0: [(1, 1), (1, 2)], 1: [(1, 2), (2, 1)], 2: [(1, 1), (2, 1)]},
            )

    def test_dangling_rejected(self):
        with pytest.raises(NotBoundedPoset):
            build([1, 2, 1], {0: [(1, 1)], 1: [(1, 1), (2, 1)]})

    def test_fat_bottom_rejected(self):
        with pytest.raises(NotBoundedPoset):
            build([2, 1], {0: [(1, 1), (2, 1)]})

    def test_bowtie_rejected_as_crossing(self):
        # two atoms under two coatoms: the non-lattice pattern cannot even
        # be drawn without a crossing, which is caught first
        with pytest.raises(Crossing):
            build(
                [1, 2, 2, 1],
                {
                    0: [(1, 1), (1, 2)],
                    1: [(1, 1), (1, 2), (2, 1), (2, 2)],
                    2: [(1, 1), (2, 1)],
                },
            )

    def test_noncrossing_bounded_encodings_are_lattices(self):
        # planar bounded posets are lattices, so every covering noncrossing
        # candidate must pass the (defensive) join/meet validation
        from ssdlat.generation import _gap_graphs, _level_compositions, _product

        for n in range(1, 8):
            for sizes in _level_compositions(n):
                stacks = [
                    _gap_graphs(sizes[g], sizes[g + 1])
                    for g in range(len(sizes) - 1)
                ]
                for gaps in _product(stacks):
                    build(sizes, gaps)  # must not raise

    def test_position_out_of_range(self):
        with pytest.raises(NotBoundedPoset):
            build([1, 1], {0: [(1, 2)]})


class TestOrderQueries:
    def test_square_join_meet(self, square):
        a, b = (1, 1), (1, 2)
        assert square.join(a, b) == (2, 1)
        assert square.meet(a, b) == (0, 1)
        assert square.leq((0, 1), (2, 1))
        assert not square.leq(a, b)

    def test_hex_fixture(self, hexagon):
        assert hexagon.join((1, 1), (1, 2)) == (3, 1)
        assert hexagon.meet((2, 1), (2, 2)) == (0, 1)

    def test_exhaustive_bounds_on_hex(self, hexagon):
        # join/meet really are least/greatest among all common bounds
        nodes = list(hexagon.nodes())
        for u in nodes:
            for v in nodes:
                j = hexagon.join(u, v)
                uppers = [w for w in nodes if hexagon.leq(u, w) and hexagon.leq(v, w)]
                assert j in uppers
                assert all(hexagon.leq(j, w) for w in uppers)
                m = hexagon.meet(u, v)
                lowers = [w for w in nodes if hexagon.leq(w, u) and hexagon.leq(w, v)]
                assert m in lowers
                assert all(hexagon.leq(w, m) for w in lowers)


class TestPredicates:
    def test_semimodular(self, square, hexagon, m3):
        assert square.is_semimodular()
        assert not hexagon.is_semimodular()
        assert m3.is_semimodular()

    def test_slim(self, m3, hexagon, chains):
        assert not m3.is_slim()
        assert chains[5].is_slim()
        assert hexagon.is_slim()
        assert hexagon.join_irreducibles() == {
            NodeRef(1, 1),
            NodeRef(1, 2),
            NodeRef(2, 1),
            NodeRef(2, 2),
        }

    def test_m3_join_irreducibles_are_atoms(self, m3):
        assert m3.join_irreducibles() == {NodeRef(1, p) for p in (1, 2, 3)}


class TestCells:
    def test_square_one_four_cell(self, square):
        cells = square.cells()
        assert len(cells) == 1 and len(cells[0]) == 4
        assert square.is_four_cell() and square.gk_condition()

    def test_hex_single_six_cell(self, hexagon):
        cells = hexagon.cells()
        assert len(cells) == 1 and len(cells[0]) == 6
        assert not hexagon.is_four_cell()
        assert not hexagon.gk_condition()

    def test_m3_two_cells_shared_top(self, m3):
        cells = m3.cells()
        assert len(cells) == 2
        assert all(len(c) == 4 for c in cells)
        assert {c.bottom for c in cells} == {NodeRef(0, 1)}
        assert {c.top for c in cells} == {NodeRef(2, 1)}
        assert m3.gk_condition()

    def test_chain_has_no_cells(self, chains):
        assert chains[4].cells() == ()
        assert chains[4].is_four_cell()

    def test_cell_count_is_euler(self, square, m3, hexagon, sqtop, sqbot):
        for d in (square, m3, hexagon, sqtop, sqbot):
            edges = sum(len(g) for g in d.gap_edges)
            assert len(d.cells()) == edges - d.n + 1


class TestBoundariesAndCorners:
    def test_square_boundaries(self, square):
        left, right = square.boundaries()
        assert left == ((0, 1), (1, 1), (2, 1))
        assert right == ((0, 1), (1, 2), (2, 1))

    def test_sqtop_left_boundary(self, sqtop):
        left, _ = sqtop.boundaries()
        assert left == ((0, 1), (1, 1), (2, 1), (3, 1))

    def test_chain_boundaries_coincide(self, chains):
        left, right = chains[4].boundaries()
        assert left == right and len(left) == 4

    def test_corners(self, square, sqtop, sqbot, chains):
        assert chains[5].corner_left() == (0, 1) and chains[5].left_rank() == 0
        assert square.corner_left() == (1, 1) and square.left_rank() == 1
        assert square.corner_right() == (1, 2) and square.right_rank() == 1
        assert sqtop.corner_left() == (1, 1) and sqtop.left_rank() == 1
        assert sqtop.corner_right() == (1, 2) and sqtop.right_rank() == 1
        assert sqbot.left_rank() == 0 and sqbot.right_rank() == 0

    def test_single_element_corner(self):
        d = chain(1)
        assert d.corner_left() == (0, 1) and d.left_rank() == 0


class TestMirror:
    def test_symmetric_fixtures(self, square, chains):
        assert square.mirror() == square
        assert chains[4].mirror() == chains[4]

    def test_sqtop_mirror_swaps_ranks(self, sqtop):
        m = sqtop.mirror()
        assert m.left_rank() == sqtop.right_rank()
        assert m.right_rank() == sqtop.left_rank()
        assert m.mirror() == sqtop


class TestCodes:
    def test_square_code(self, square):
        assert square.code() == "SSD1 n=4 L=1,2,1 E=0:1-1,1-2;1:1-1,2-1"
        assert parse_code(square.code()) == square

    def test_chain_code(self, chains):
        assert parse_code("SSD1 n=3 L=1,1,1 E=0:1-1;1:1-1") == chains[3]

    def test_single_element(self):
        d = chain(1)
        assert d.code() == "SSD1 n=1 L=1 E="
        assert parse_code(d.code()) == d

    @pytest.mark.parametrize(
        "bad",
        [
            "",
            "SSD2 n=1 L=1 E=",
            "SSD1 n=2 L=1,1 E=0:1-1 ",
            "SSD1 n=3 L=1,1 E=0:1-1",
            "SSD1 n=2 L=1,1 E=1:1-1",
            "SSD1 n=2 L=1,1 E=0:1-1;",
            "SSD1  n=2 L=1,1 E=0:1-1",
        ],
    )
    def test_parse_errors(self, bad):
        with pytest.raises(ParseError):
            parse_code(bad)

    def test_parse_error_position(self):
        with pytest.raises(ParseError) as ei:
            parse_code("SSD1 n=x L=1 E=")
        assert ei.value.line == 1 and ei.value.column == 8


class TestProperties:
    @given(d=diagrams())
    def test_code_round_trip(self, d):
        assert parse_code(render_code(d)) == d

    @given(d=diagrams())
    def test_mirror_involution_on_codes(self, d):
        assert d.mirror().mirror().code() == d.code()
        m = d.mirror()
        assert (m.left_rank(), m.right_rank()) == (d.right_rank(), d.left_rank())

    @given(d=diagrams())
    def test_height_equals_level(self, d):
        # both the longest and the shortest bottom-to-node cover path
        # have length equal to the node's level
        for x in d.nodes():
            if x.level == 0:
                continue
            downs = d.down_covers(x)
            assert all(y.level == x.level - 1 for y in downs)

    @given(d=diagrams())
    def test_boundaries_are_cover_chains(self, d):
        left, right = d.boundaries()
        for a, b in zip(left, left[1:]):
            assert d.covers(a, b)
        for a, b in zip(right, right[1:]):
            assert d.covers(a, b)

    @given(d=diagrams())
    def test_dichotomy_on_generated(self, d):
        lr, rr = d.left_rank(), d.right_rank()
        assert (lr == 0) == (rr == 0)
        if lr == 0:
            assert d.corner_left() == d.corner_right() == (0, 1)

    @given(d=diagrams())
    def test_internal_doubly_irreducible_exists(self, d):
        if d.n < 3:
            return
        found = False
        for k in range(1, d.length):
            x = (k, 1)
            if len(d.up_covers(x)) == 1 and len(d.down_covers(x)) == 1:
                found = True
        assert found

    @given(d=diagrams())
    def test_at_most_two_upper_covers(self, d):
        assert all(len(d.up_covers(x)) <= 2 for x in d.nodes())

    @given(d=diagrams())
    def test_cells_euler_relation(self, d):
        edges = sum(len(g) for g in d.gap_edges)
        cells = d.cells()
        assert len(cells) == edges - d.n + 1
        # one cell per pair of consecutive upward edges at its bottom
        forks = sum(max(len(d.up_covers(x)) - 1, 0) for x in d.nodes())
        assert len(cells) == forks

    @given(d=diagrams())
    def test_generated_diagrams_are_four_cell(self, d):
        assert d.is_four_cell() and d.gk_condition()
        for c in d.cells():
            assert c.left[1] != c.right[1]
            assert d.covers(c.bottom, c.left[1]) and d.covers(c.bottom, c.right[1])
            assert d.covers(c.left[1], c.top) and d.covers(c.right[1], c.top)
