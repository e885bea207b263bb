import random

import pytest

import subsync


def test_worked_example_edit():
    assert subsync.apply_edit("11100010100110", 5, "0010", "10011") == "111010011100110"


def test_balls():
    ball = subsync.edit_ball("0000", 1, 1)
    assert len(ball) == 12
    assert "00000" in ball
    assert set(subsync.confusion_ball("0", 1, 1)) == {"0", "1"}
    assert subsync.ball_size_upper_bound(4, 1, 1) == 1080


def test_worst_case_round_trip():
    x = "11100010100110"
    message = subsync.encode_worst(x, 1, 5)
    assert message[:4] == b"DXSE"
    assert subsync.decode("111010011100110", message) == x
    info = subsync.encoding_info(message)
    assert info["scheme"] == "worst"
    assert (info["n"], info["t"], info["k"]) == (14, 1, 5)


def test_average_case_round_trip():
    rng = random.Random(3)
    for _ in range(20):
        x = "".join(rng.choice("01") for _ in range(16))
        message = subsync.encode_average(x, 1, 1, window=6)
        dense = subsync.is_dense(x, window=6)
        assert subsync.encoding_info(message)["scheme"] == ("dense" if dense else "non-dense")
        pos = rng.randrange(1, 16)
        y = subsync.apply_edit(x, pos, x[pos - 1], "1" if x[pos - 1] == "0" else "0")
        assert subsync.decode(y, message) == x


def test_modulus_and_big_labels():
    assert subsync.find_separating_modulus(0, [1, 2, 3]) == 4
    big = 1 << 200
    assert subsync.find_separating_modulus(big, [big + 1]) == 2
    assert subsync.label("01") > 0


def test_errors_carry_codes():
    with pytest.raises(subsync.SubsyncError) as err:
        subsync.find_separating_modulus(5, [1, 5])
    assert err.value.code == "NotSeparable"
    corrupted = b"XXSE" + subsync.encode_worst("0110", 1, 1)[4:]
    with pytest.raises(subsync.SubsyncError):
        subsync.decode("0110", corrupted)
