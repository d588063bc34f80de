import pytest

from wimaxsched import Packet, QosClass, end_to_end_delay, packet_bits


def _packet(**kw):
    defaults = dict(
        id=1, flow_id=1, qos=QosClass.BE, precedence=0,
        size_bytes=100, arrival_time=0.0,
    )
    defaults.update(kw)
    return Packet(**defaults)


def test_packet_bits_scales_linearly():
    assert packet_bits(_packet(size_bytes=1)) == 8
    assert packet_bits(_packet(size_bytes=100)) == 800
    assert packet_bits(_packet(size_bytes=1500)) == 12000


def test_end_to_end_delay_is_delivery_minus_arrival():
    p = _packet(arrival_time=1.0)
    p.delivery_time = 3.28231
    assert end_to_end_delay(p) == pytest.approx(2.28231)


def test_zero_delay_when_delivered_instantly():
    p = _packet(arrival_time=2.0)
    p.delivery_time = 2.0
    assert end_to_end_delay(p) == 0.0


def test_undelivered_packet_has_no_delay():
    with pytest.raises(ValueError):
        end_to_end_delay(_packet())


def test_class_names_render_plainly():
    assert str(QosClass.UGS) == "UGS"
    assert str(QosClass.ERTPS) == "ertPS"
    assert str(QosClass.BE) == "BE"
