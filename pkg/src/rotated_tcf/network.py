"""Networked verifier/prover sessions over the framed JSON wire protocol.

One protocol session per TCP connection, driven through the fixed order
hello -> setup -> response1 -> challenge -> response2 -> result.  Both ends
derive their randomness from per-session streams, so a loopback run with
the same master seed reproduces the in-process transcripts bit for bit.

The honest quantum prover only exists as a simulation, which needs the
key-side witness (s, e); when the verifier is started with the witness
channel enabled it ships that witness in a separate, loudly labeled
setup-typed frame.  Classical strategies never receive it.
"""
from __future__ import annotations

import socket

from .params import Params, tiny_params
from .protocol_q import (HonestQuantumProver, honest_prover_round1,
                         honest_prover_round2, verifier_round1,
                         verifier_score)
from .sampling import RngStream, sample_bits
from .stats import Stats
from .wire import (PROTOCOL_VERSION, WITNESS_LABEL, WireError, decode_bits,
                   decode_matrix, decode_vector, encode_bits, encode_matrix,
                   encode_vector, make_message, recv_message, send_message)

DEFAULT_TIMEOUT = 30.0


class SessionError(Exception):
    pass


def _send_error(sock, code: str) -> None:
    try:
        send_message(sock, make_message("error", {"code": code}))
    except OSError:
        pass


def _expect(sock, expected_type: str) -> dict:
    msg = recv_message(sock)
    if msg["type"] == "error":
        raise SessionError(f"peer error: {msg['payload'].get('code')}")
    if msg["type"] != expected_type:
        _send_error(sock, "protocol-order")
        raise SessionError(
            f"expected {expected_type}, got {msg['type']} (protocol-order)")
    return msg


def _handshake(sock, role: str) -> None:
    send_message(sock, make_message("hello", {"role": role,
                                              "version": PROTOCOL_VERSION}))
    msg = _expect(sock, "hello")
    if msg["payload"].get("version") != PROTOCOL_VERSION:
        _send_error(sock, "version-mismatch")
        raise SessionError("protocol version mismatch")


def open_server_socket(host: str, port: int) -> socket.socket:
    srv = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    srv.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    srv.bind((host, port))
    srv.listen(8)
    return srv


def verifier_session(conn, params: Params, trial_stream: RngStream,
                     witness_channel: bool = False, include_pk: bool = False):
    """Drive one session on an accepted connection; returns a Transcript."""
    _handshake(conn, "verifier")
    vstate, (pk, ct) = verifier_round1(params, trial_stream.derive("verifier"))
    setup = {
        "preset": params.preset_name,
        "lambda": params.lam,
        "n": params.n,
        "q": str(params.q),
        "sigma": params.sigma,
        "pk": {"A": encode_matrix(pk.A), "v": encode_vector(pk.v)},
        "ct": {"a": encode_vector(ct.a), "w": str(ct.w)},
    }
    send_message(conn, make_message("setup", setup))
    if witness_channel:
        witness = {
            WITNESS_LABEL: {"s": encode_vector(vstate.keypair.s),
                            "e": encode_vector(vstate.keypair.e)},
            "note": ("simulation-only key-side witness for the honest "
                     "quantum prover simulator; never part of the protocol"),
        }
        send_message(conn, make_message("setup", witness))
    msg = _expect(conn, "response1")
    y = decode_vector(msg["payload"]["y"])
    u = decode_bits(msg["payload"]["u"])
    if y.shape != (params.m,) or u.shape != (params.nQ,):
        _send_error(conn, "bad-dimensions")
        raise SessionError("response1 has wrong dimensions")
    b_prime = int(sample_bits(1, trial_stream.derive("challenge"))[0])
    vstate.b_prime = b_prime
    send_message(conn, make_message("challenge", {"b_prime": b_prime}))
    msg = _expect(conn, "response2")
    d_prime = int(msg["payload"]["d_prime"])
    if d_prime not in (0, 1):
        _send_error(conn, "bad-bit")
        raise SessionError("d_prime is not a bit")
    transcript = verifier_score(vstate, y, u, d_prime,
                                seed_info=trial_stream.seed.hex(),
                                include_pk=include_pk)
    send_message(conn, make_message("result",
                                    {"success": bool(transcript.success),
                                     "d": transcript.d}))
    return transcript


def serve_verifier(server_sock, params: Params, stream: RngStream,
                   sessions: int, witness_channel: bool = False,
                   include_pk: bool = False,
                   timeout: float = DEFAULT_TIMEOUT):
    """Accept `sessions` connections in order; session i uses the stream
    derive('trial', i).  Returns (Stats, transcripts)."""
    transcripts = []
    wins = 0
    for i in range(sessions):
        conn, _ = server_sock.accept()
        conn.settimeout(timeout)
        try:
            t = verifier_session(conn, params, stream.derive("trial", i),
                                 witness_channel=witness_channel,
                                 include_pk=include_pk)
        except socket.timeout:
            _send_error(conn, "timeout")
            raise SessionError("session timed out") from None
        finally:
            conn.close()
        transcripts.append(t)
        wins += int(t.success)
    return Stats(successes=wins, trials=sessions), transcripts


def _params_from_setup(payload: dict) -> Params:
    return tiny_params(n=int(payload["n"]), q=int(payload["q"]),
                       sigma=float(payload["sigma"]),
                       lam=int(payload["lambda"]))


def prover_session(host: str, port: int, strategy, trial_stream: RngStream,
                   timeout: float = DEFAULT_TIMEOUT) -> dict:
    """Run one session as the prover; returns the result payload."""
    quantum = getattr(strategy, "quantum", False)
    with socket.create_connection((host, port), timeout=timeout) as sock:
        _handshake(sock, "prover")
        setup = _expect(sock, "setup")["payload"]
        params = _params_from_setup(setup)
        pk_A = decode_matrix(setup["pk"]["A"])
        pk_v = decode_vector(setup["pk"]["v"])
        from .regev import Ciphertext, PublicKey
        pk = PublicKey(params=params, A=pk_A, v=pk_v)
        ct = Ciphertext(a=decode_vector(setup["ct"]["a"]),
                        w=int(setup["ct"]["w"]))
        pstream = trial_stream.derive("prover")
        if quantum:
            wframe = _expect(sock, "setup")["payload"]
            if WITNESS_LABEL not in wframe:
                raise SessionError("verifier did not open the witness channel")
            witness = (decode_vector(wframe[WITNESS_LABEL]["s"]),
                       decode_vector(wframe[WITNESS_LABEL]["e"]))
            pstate, (y, u) = honest_prover_round1(params, pk, ct, witness,
                                                  pstream)
        else:
            y, u, mem = strategy.first_response(pk, ct, pstream)
        send_message(sock, make_message("response1",
                                        {"y": encode_vector(y),
                                         "u": encode_bits(u)}))
        challenge = _expect(sock, "challenge")["payload"]
        b_prime = int(challenge["b_prime"])
        if quantum:
            d_prime = honest_prover_round2(pstate, b_prime, pstream)
        else:
            d_prime = int(strategy.second_response(b_prime, mem, pstream))
        send_message(sock, make_message("response2", {"d_prime": d_prime}))
        return _expect(sock, "result")["payload"]


def connect_prover(host: str, port: int, strategy, stream: RngStream,
                   sessions: int, timeout: float = DEFAULT_TIMEOUT):
    """Run `sessions` sequential sessions; returns the list of results."""
    results = []
    for i in range(sessions):
        results.append(prover_session(host, port, strategy,
                                      stream.derive("trial", i),
                                      timeout=timeout))
    return results
