import socket
import struct
import threading

import numpy as np
import pytest

from rotated_tcf.wire import (MAX_FRAME_BYTES, PROTOCOL_VERSION,
                              SECRET_FIELDS, WITNESS_LABEL, WireError,
                              check_no_secrets, decode_bits, decode_matrix,
                              decode_vector, dump_frame, encode_bits,
                              encode_matrix, encode_vector, make_message,
                              parse_frame, recv_message, send_message)


def test_vector_codec_roundtrip_exact():
    v = np.array([0, 1, 4398046511118, (1 << 60) + 7], dtype=np.int64)
    encoded = encode_vector(v)
    assert all(isinstance(x, str) for x in encoded)
    assert np.array_equal(decode_vector(encoded), v)


def test_matrix_and_bits_codecs():
    M = np.array([[1, 2], [3, 4]], dtype=np.int64)
    assert np.array_equal(decode_matrix(encode_matrix(M)), M)
    bits = np.array([0, 1, 1, 0], dtype=np.int64)
    assert np.array_equal(decode_bits(encode_bits(bits)), bits)
    with pytest.raises(WireError):
        decode_bits([0, 2, 1])


def test_frame_roundtrip():
    msg = make_message("challenge", {"b_prime": 1})
    frame = dump_frame(msg)
    (length,) = struct.unpack(">I", frame[:4])
    assert length == len(frame) - 4
    assert parse_frame(frame[4:]) == msg
    assert msg["protocol_version"] == PROTOCOL_VERSION


def test_unknown_message_type_rejected():
    with pytest.raises(WireError):
        make_message("gossip", {})
    with pytest.raises(WireError):
        parse_frame(b'{"type": "gossip", "payload": {}}')


def test_malformed_frames_rejected():
    with pytest.raises(WireError):
        parse_frame(b"{broken")
    with pytest.raises(WireError):
        parse_frame(b'"just a string"')
    with pytest.raises(WireError):
        parse_frame(b'{"payload": {}}')


def test_secret_fields_never_travel():
    for name in sorted(SECRET_FIELDS):
        msg = make_message("setup", {name: "123"})
        with pytest.raises(WireError, match=name):
            dump_frame(msg)
        # nesting does not launder the field name
        msg = make_message("setup", {"inner": [{"deep": {name: []}}]})
        with pytest.raises(WireError):
            dump_frame(msg)


def test_witness_label_is_the_only_exemption():
    payload = {WITNESS_LABEL: {"s": ["1"], "e": ["0"]}, "note": "simulation"}
    dump_frame(make_message("setup", payload))  # allowed
    check_no_secrets({"payload": payload})
    # a secret next to the witness subtree is still rejected
    with pytest.raises(WireError):
        dump_frame(make_message("setup",
                                {WITNESS_LABEL: {"s": ["1"]}, "b": 1}))


def test_oversized_frame_rejected():
    msg = make_message("setup", {"blob": "x" * (MAX_FRAME_BYTES + 10)})
    with pytest.raises(WireError):
        dump_frame(msg)
    header = struct.pack(">I", MAX_FRAME_BYTES + 1)
    a, b = socket.socketpair()
    try:
        a.sendall(header)
        with pytest.raises(WireError):
            recv_message(b)
    finally:
        a.close()
        b.close()


def test_send_recv_over_socketpair():
    a, b = socket.socketpair()
    try:
        msg = make_message("result", {"success": True, "d": 0})
        t = threading.Thread(target=send_message, args=(a, msg))
        t.start()
        assert recv_message(b) == msg
        t.join()
    finally:
        a.close()
        b.close()


def test_truncated_stream_detected():
    a, b = socket.socketpair()
    try:
        frame = dump_frame(make_message("challenge", {"b_prime": 0}))
        a.sendall(frame[: len(frame) - 3])
        a.close()
        with pytest.raises(WireError):
            recv_message(b)
    finally:
        b.close()
