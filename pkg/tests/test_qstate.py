import math

import numpy as np
import pytest

from conftest import rand_complex, rand_state_amps
from qmatops import oracle
from qmatops.errors import (
    DuplicateRegisterName,
    NonPowerOfTwo,
    QubitCapExceeded,
    ResidualEntanglement,
    ValueOutOfRange,
    ZeroMatrix,
)
from qmatops.gates import postselect
from qmatops.qstate import (
    QState,
    RegisterLayout,
    append_ancilla,
    decode_matrix,
    encode_matrix,
    merge_registers,
    permute_registers,
    set_max_qubits,
    tensor,
)


def test_encode_identity():
    enc = encode_matrix(np.eye(2), "R", "C")
    assert enc.scale == pytest.approx(math.sqrt(2), abs=1e-15)
    assert enc.state.amplitude(R=0, C=0) == pytest.approx(1 / math.sqrt(2))
    assert enc.state.amplitude(R=1, C=1) == pytest.approx(1 / math.sqrt(2))
    assert enc.state.amplitude(R=0, C=1) == 0


def test_encode_rejects_one_by_one():
    with pytest.raises(NonPowerOfTwo):
        encode_matrix([[1.0]], "R", "C")


@pytest.mark.parametrize("shape", [(3, 2), (2, 6), (1, 4)])
def test_encode_rejects_non_power_of_two(shape):
    with pytest.raises(NonPowerOfTwo):
        encode_matrix(np.ones(shape), "R", "C")


def test_encode_rejects_zero_matrix():
    with pytest.raises(ZeroMatrix):
        encode_matrix(np.zeros((2, 2)), "R", "C")


def test_encode_three_four():
    # scale checked against the independent oracle normalization
    expected, scale = oracle.normalize_frobenius([[3, 4], [0, 0]])
    assert scale == 5.0
    enc = encode_matrix([[3, 4], [0, 0]], "R", "C")
    assert enc.scale == pytest.approx(scale, abs=1e-15)
    assert enc.state.amplitude(R=0, C=0) == pytest.approx(0.6, abs=1e-15)
    assert enc.state.amplitude(R=0, C=1) == pytest.approx(0.8, abs=1e-15)
    np.testing.assert_allclose(enc.decode(), expected, atol=1e-15)


@pytest.mark.parametrize("shape", [(2, 2), (2, 4), (4, 4), (4, 8)])
def test_round_trip(rng, shape):
    mat = rand_complex(rng, *shape)
    enc = encode_matrix(mat, "R", "C")
    assert abs(enc.state.norm() - 1) < 1e-10
    np.testing.assert_allclose(decode_matrix(enc.state, "R", "C"), mat / np.linalg.norm(mat), rtol=0, atol=1e-12)
    np.testing.assert_allclose(enc.matrix(), mat, atol=1e-12)


def test_index_convention():
    lay = RegisterLayout.of(("R", 2), ("C", 3))
    for s in range(4):
        for t in range(8):
            assert lay.index_of({"R": s, "C": t}) == s * 8 + t
            assert lay.values_of(s * 8 + t) == {"R": s, "C": t}


def test_qubit_bit_is_msb_first():
    lay = RegisterLayout.of(("A", 3), ("B", 2))
    assert [lay.qubit_bit("A", j) for j in (1, 2, 3)] == [4, 3, 2]
    assert [lay.qubit_bit("B", j) for j in (1, 2)] == [1, 0]


def test_duplicate_names():
    with pytest.raises(DuplicateRegisterName):
        RegisterLayout.of(("A", 1), ("A", 2))


def test_tensor_basis():
    a = QState.basis(RegisterLayout.of(("a", 1)), {"a": 0})
    b = QState.basis(RegisterLayout.of(("b", 1)), {"b": 1})
    ab = tensor(a, b)
    assert ab.layout.names == ("a", "b")
    assert ab.amplitude(a=0, b=1) == 1


def test_tensor_reproduces_product_coefficients(rng):
    a1, a2 = rand_complex(rng, 2, 4), rand_complex(rng, 2, 4)
    e1, e2 = encode_matrix(a1, "R1", "C1"), encode_matrix(a2, "R2", "C2")
    phi0 = tensor(e1.state, e2.state)
    n1, n2 = a1 / np.linalg.norm(a1), a2 / np.linalg.norm(a2)
    for s1, t1, s2, t2 in np.ndindex(2, 4, 2, 4):
        assert phi0.amplitude(R1=s1, C1=t1, R2=s2, C2=t2) == pytest.approx(n1[s1, t1] * n2[s2, t2], abs=1e-15)


def test_tensor_duplicate_names(rng):
    a = encode_matrix(rand_complex(rng, 2, 2), "R", "C").state
    with pytest.raises(DuplicateRegisterName):
        tensor(a, a)


def test_tensor_associative_exact_on_dyadic_amplitudes():
    # dyadic values multiply without rounding, so the layouts must agree bit for bit
    a = QState(RegisterLayout.of(("a", 2)), [0.5, -0.5j, 0.5, 0.5])
    b = QState(RegisterLayout.of(("b", 1)), [0.6, 0.8j])
    c = QState(RegisterLayout.of(("c", 2)), [0.5j, 0.5, -0.5, 0.5])
    left, right = tensor(tensor(a, b), c), tensor(a, tensor(b, c))
    assert left.layout == right.layout
    np.testing.assert_array_equal(left.amplitudes, right.amplitudes)


def test_tensor_associative_and_norm(rng):
    mk = lambda name, w: QState(RegisterLayout.of((name, w)), rand_state_amps(rng, 1 << w))
    a, b, c = mk("a", 2), mk("b", 1), mk("c", 3)
    left, right = tensor(tensor(a, b), c), tensor(a, tensor(b, c))
    np.testing.assert_allclose(left.amplitudes, right.amplitudes, rtol=0, atol=1e-15)
    assert abs(left.norm() - 1) < 1e-10


def test_append_ancilla():
    one = QState.basis(RegisterLayout.of(("q", 1)), {"q": 1})
    out = append_ancilla(one, "anc", 1, 0)
    assert out.amplitudes[2] == 1
    assert out.layout.names == ("q", "anc")
    with pytest.raises(DuplicateRegisterName):
        append_ancilla(out, "q", 1)
    with pytest.raises(ValueOutOfRange):
        append_ancilla(one, "z", 2, 4)


def test_append_then_postselect_is_certain(rng):
    st = encode_matrix(rand_complex(rng, 2, 4), "R", "C").state
    widened = append_ancilla(st, "B1", 2, 3)
    back, p = postselect(widened, "B1", 3)
    assert p == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(back.amplitudes, st.amplitudes, atol=1e-15)


def test_decode_residual_entanglement():
    lay = RegisterLayout.of(("R", 1), ("C", 1), ("anc", 1))
    amps = np.zeros(8)
    amps[0b000] = amps[0b001] = 1 / math.sqrt(2)
    with pytest.raises(ResidualEntanglement):
        decode_matrix(QState(lay, amps), "R", "C")


def test_decode_with_sharp_ancilla(rng):
    enc = encode_matrix(rand_complex(rng, 4, 2), "R", "C")
    st = append_ancilla(enc.state, "anc", 2, 2)
    np.testing.assert_allclose(decode_matrix(st, "R", "C"), enc.decode(), atol=1e-15)


def test_merge_registers_is_index_concatenation(rng):
    st = QState(RegisterLayout.of(("a", 1), ("b", 2), ("c", 1)), rand_state_amps(rng, 16))
    merged = merge_registers(st, ["a", "b"], "ab")
    assert merged.layout.registers == (("ab", 3), ("c", 1))
    for x, y, z in np.ndindex(2, 4, 2):
        assert merged.amplitude(ab=4 * x + y, c=z) == st.amplitude(a=x, b=y, c=z)


def test_permute_registers(rng):
    st = QState(RegisterLayout.of(("a", 1), ("b", 2), ("c", 1)), rand_state_amps(rng, 16))
    p = permute_registers(st, ["c", "a", "b"])
    for x, y, z in np.ndindex(2, 4, 2):
        assert p.amplitude(a=x, b=y, c=z) == st.amplitude(a=x, b=y, c=z)


def test_amplitudes_read_only(rng):
    st = encode_matrix(rand_complex(rng, 2, 2), "R", "C").state
    with pytest.raises(ValueError):
        st.amplitudes[0] = 0


def test_qubit_cap():
    old = set_max_qubits(4)
    try:
        with pytest.raises(QubitCapExceeded):
            encode_matrix(np.ones((8, 4)), "R", "C")
    finally:
        set_max_qubits(old)
