import pytest

from wimaxsched import (
    QosClass,
    assign_precedence,
    dscp_of,
    expedited_queues,
    precedences_of,
    queue_index,
)


def test_precedence_table():
    assert precedences_of(QosClass.BE) == (0,)
    assert precedences_of(QosClass.NRTPS) == (1, 2, 6)
    assert precedences_of(QosClass.RTPS) == (3,)
    assert precedences_of(QosClass.ERTPS) == (4,)
    assert precedences_of(QosClass.UGS) == (5, 7)


def test_assign_precedence_cycles_through_the_class_set():
    assert assign_precedence(QosClass.NRTPS, 0) == 1
    assert assign_precedence(QosClass.NRTPS, 4) == 2
    # Enumerate the first six ordinals: the set repeats in order.
    got = [assign_precedence(QosClass.NRTPS, k) for k in range(6)]
    assert got == [1, 2, 6, 1, 2, 6]


def test_assign_precedence_singleton_class():
    assert assign_precedence(QosClass.RTPS, 9) == 3


def test_assign_precedence_rejects_negative_ordinal():
    with pytest.raises(ValueError):
        assign_precedence(QosClass.BE, -1)


def test_dscp_is_precedence_in_the_top_three_bits():
    assert dscp_of(0) == 0
    assert dscp_of(3) == 24  # class selector CS3
    assert dscp_of(7) == 56  # class selector CS7
    for p in range(8):
        assert dscp_of(p) == p * 8


def test_dscp_rejects_out_of_range():
    with pytest.raises(ValueError):
        dscp_of(8)
    with pytest.raises(ValueError):
        dscp_of(-1)


class TestQueueIndex:
    def test_identity_at_eight_queues(self):
        for p in range(8):
            assert queue_index(p, 8) == p

    def test_high_precedences_fold_into_the_top_queue(self):
        assert queue_index(7, 6) == 5
        assert [queue_index(p, 6) for p in range(8)] == [0, 1, 2, 3, 4, 5, 5, 5]

    def test_extra_queues_stay_unfed(self):
        assert queue_index(7, 10) == 7
        landed = {queue_index(p, 10) for p in range(8)}
        assert landed == set(range(8))  # queues 8 and 9 receive nothing

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            queue_index(8, 8)
        with pytest.raises(ValueError):
            queue_index(0, 0)


def test_expedited_queues_are_those_fed_only_by_high_precedence():
    assert expedited_queues(8) == frozenset({5, 6, 7})
    # Folding: with six queues the top queue absorbs precedences 5..7.
    assert expedited_queues(6) == frozenset({5})
    # Unfed queues above the precedence range count as expedited.
    assert expedited_queues(10) == frozenset({5, 6, 7, 8, 9})
    # A four-queue bank folds precedence 3..7 into queue 3; nothing is pure.
    assert expedited_queues(4) == frozenset()
