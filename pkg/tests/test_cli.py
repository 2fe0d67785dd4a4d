import json

import numpy as np
import pytest

from mubwigner.cli import main
from mubwigner.mub import mub_projector
from mubwigner.geometry import phase_geometry
from mubwigner.serialize import (
    matrix_from_json,
    matrix_to_json,
    resolve_state,
    wigner_table_from_json,
    wigner_table_to_json,
)
from mubwigner.spins import spin_matrix
from mubwigner.wigner import (
    max_entangled_density,
    random_density,
    reconstruct_density,
    wigner_function,
)

TOL = 1e-10


def write_json(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def test_matrix_json_round_trip(rng):
    M = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    assert np.abs(matrix_from_json(matrix_to_json(M)) - M).max() == 0


def test_resolve_state_shorthands():
    P = resolve_state({"alpha": [1], "s": [0]}, 3, 1)
    geom = phase_geometry(3, 1)
    assert np.abs(P - mub_projector(geom, 1, (0,)).matrix).max() < TOL
    P = resolve_state({"alpha": "inf", "s": [2]}, 3, 1)
    assert np.abs(P - mub_projector(geom, 3, (2,)).matrix).max() < TOL
    rho = resolve_state({"random": "density"}, 3, 1, np.random.default_rng(5))
    assert abs(np.trace(rho) - 1) < TOL
    with pytest.raises(ValueError):
        resolve_state({"bogus": 1}, 3, 1)


def test_wigner_table_json_round_trip(rng):
    wt = wigner_function(random_density(9, rng), 3, 2, "separable")
    data = wigner_table_to_json(wt)
    back = wigner_table_from_json(data)
    assert np.abs(back.values - wt.values).max() < TOL


def test_cli_mub(tmp_path, capsys):
    out = tmp_path / "mub32"
    assert main(["mub", "--p", "3", "--n", "2", "--out", str(out)]) == 0
    data = json.loads((tmp_path / "mub32.json").read_text())
    assert len(data["bases"]) == 10
    report = json.loads((tmp_path / "mub32.report.json").read_text())
    assert report["passed"] and report["max_unbiasedness_defect"] < 1e-10
    # overlap of two projectors from different bases is 1/9
    P0 = matrix_from_json(data["bases"][0]["projectors"][0])
    P1 = matrix_from_json(data["bases"][3]["projectors"][4])
    assert abs(np.trace(P0 @ P1).real - 1 / 9) < TOL


def test_cli_mub_rejects_nonprime(tmp_path):
    assert main(["mub", "--p", "4", "--n", "1", "--out", str(tmp_path / "x")]) == 2


def test_cli_wigner_outputs(tmp_path, rng):
    rho = random_density(3, rng)
    state = write_json(tmp_path / "state.json", matrix_to_json(rho))
    out = tmp_path / "w"
    rc = main(
        ["wigner", "--p", "3", "--n", "1", "--input", state,
         "--format", "json,csv,pgm", "--out", str(out)]
    )
    assert rc == 0
    table = wigner_table_from_json(json.loads((tmp_path / "w.json").read_text()))
    assert np.abs(reconstruct_density(table) - rho).max() < TOL
    csv = (tmp_path / "w.csv").read_text().strip().splitlines()
    assert len(csv) == 3 and len(csv[0].split(",")) == 3
    # csv rows are v1, columns v0
    wt = wigner_function(rho, 3, 1, "plain")
    for v1, line in enumerate(csv):
        for v0, cell in enumerate(line.split(",")):
            assert abs(float(cell) - wt.value((v0, v1)).real) < TOL
    pgm = (tmp_path / "w.pgm").read_text().splitlines()
    assert pgm[0] == "P2"
    assert pgm[3].split() == ["3", "3"]
    greys = [int(x) for row in pgm[5:8] for x in row.split()]
    assert min(greys) == 0 and max(greys) == 255


def test_spin_coeff_json_round_trip(rng):
    from mubwigner.serialize import spin_coeffs_from_json, spin_coeffs_to_json
    from mubwigner.spins import spin_decompose

    A = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    coeffs = spin_decompose(A, 3, 1)
    back = spin_coeffs_from_json(spin_coeffs_to_json(coeffs))
    assert set(back) == set(coeffs)
    assert all(abs(back[k] - coeffs[k]) < 1e-15 for k in coeffs)


def test_cli_wigner_superposition_state(tmp_path):
    # equal superposition of two basis states on a qutrit: the emitted grid
    # must match the in-process pipeline exactly
    v = np.zeros(3, dtype=complex)
    v[1] = v[2] = 1 / np.sqrt(2)
    rho = np.outer(v, v.conj())
    state = write_json(tmp_path / "psi.json", matrix_to_json(rho))
    rc = main(
        ["wigner", "--p", "3", "--n", "1", "--input", state,
         "--format", "json,pgm", "--out", str(tmp_path / "wpsi")]
    )
    assert rc == 0
    table = wigner_table_from_json(json.loads((tmp_path / "wpsi.json").read_text()))
    want = wigner_function(rho, 3, 1, "plain")
    assert np.abs(table.values - want.values).max() < TOL
    pgm = (tmp_path / "wpsi.pgm").read_text().splitlines()
    assert pgm[0] == "P2" and len(pgm) == 8


def test_cli_wigner_maximally_entangled(tmp_path):
    rho = max_entangled_density(3)
    state = write_json(tmp_path / "ent.json", matrix_to_json(rho))
    out = tmp_path / "went"
    rc = main(["wigner", "--p", "3", "--n", "2", "--input", state, "--out", str(out)])
    assert rc == 0
    table = wigner_table_from_json(json.loads((tmp_path / "went.json").read_text()))
    nonzero = (np.abs(table.values) > 1e-10).sum()
    assert nonzero == 9


def test_cli_wigner_non_hermitian_operator(tmp_path, rng, capsys):
    # operator-valued tables are allowed; only the JSON form is emitted
    O = np.zeros((3, 3), dtype=complex)
    O[0, 2] = 1.0
    state = write_json(tmp_path / "op.json", matrix_to_json(O))
    rc = main(
        ["wigner", "--p", "3", "--n", "1", "--input", state,
         "--format", "json,csv", "--out", str(tmp_path / "wop")]
    )
    assert rc == 0
    assert not (tmp_path / "wop.csv").exists()
    table = wigner_table_from_json(json.loads((tmp_path / "wop.json").read_text()))
    assert np.abs(reconstruct_density(table) - O).max() < TOL


def test_cli_wigner_pgm_needs_n1(tmp_path, rng):
    state = write_json(tmp_path / "s.json", matrix_to_json(random_density(9, rng)))
    rc = main(
        ["wigner", "--p", "3", "--n", "2", "--input", state,
         "--format", "pgm", "--out", str(tmp_path / "x")]
    )
    assert rc == 2


def test_cli_wigner_size_mismatch(tmp_path, rng):
    state = write_json(tmp_path / "s.json", matrix_to_json(random_density(3, rng)))
    rc = main(["wigner", "--p", "2", "--n", "1", "--input", state, "--out", str(tmp_path / "x")])
    assert rc == 2


def test_cli_check_product_state(tmp_path, rng):
    tau, mu = random_density(3, rng), random_density(3, rng)
    state = write_json(tmp_path / "prod.json", matrix_to_json(np.kron(tau, mu)))
    rc = main(
        ["check", "--p", "3", "--n", "2", "--input", state,
         "--checks", "marginals,plancherel,separability,positivity,pt",
         "--out", str(tmp_path / "rep.json")]
    )
    assert rc == 0
    rep = json.loads((tmp_path / "rep.json").read_text())
    assert rep["passed"]
    assert set(rep["checks"]) == {"marginals", "plancherel", "separability", "positivity", "pt"}


def test_cli_check_two_qubit_product(tmp_path, rng):
    tau, mu = random_density(2, rng), random_density(2, rng)
    state = write_json(tmp_path / "prod2.json", matrix_to_json(np.kron(tau, mu)))
    rc = main(
        ["check", "--p", "2", "--n", "2", "--input", state,
         "--checks", "marginals,separability,pt", "--out", str(tmp_path / "rep2.json")]
    )
    assert rc == 0
    rep = json.loads((tmp_path / "rep2.json").read_text())
    assert rep["convention"] == "p2-left"
    assert rep["checks"]["separability"]["transpose_on"] == 1


def test_marginal_rejects_out_of_range_class(rng):
    from mubwigner.wigner import marginal_along

    wt = wigner_function(random_density(3, rng), 3, 1, "plain")
    with pytest.raises(ValueError):
        marginal_along(wt, -1, (0,))
    with pytest.raises(ValueError):
        marginal_along(wt, 4, (0,))


def test_cli_check_entangled_pt_fails(tmp_path):
    state = write_json(tmp_path / "ent.json", matrix_to_json(max_entangled_density(3)))
    rc = main(
        ["check", "--p", "3", "--n", "2", "--input", state,
         "--checks", "pt", "--out", str(tmp_path / "rep.json")]
    )
    assert rc == 1
    rep = json.loads((tmp_path / "rep.json").read_text())
    assert rep["checks"]["pt"]["min_eigenvalue"] < -0.1


def test_cli_check_unknown_check(tmp_path, rng):
    state = write_json(tmp_path / "s.json", matrix_to_json(random_density(3, rng)))
    rc = main(
        ["check", "--p", "3", "--n", "1", "--input", state,
         "--checks", "bogus", "--out", str(tmp_path / "rep.json")]
    )
    assert rc == 2


def test_cli_evolve_trajectory(tmp_path):
    S01 = spin_matrix(3, 0, 1)
    H = S01 + S01.conj().T
    hfile = write_json(tmp_path / "H.json", matrix_to_json(H))
    write_json(tmp_path / "s.json", {"alpha": [1], "s": [0]})
    rc = main(
        ["evolve", "--p", "3", "--n", "1", "--input", str(tmp_path / "s.json"),
         "--hamiltonian", hfile, "--t0", "0", "--t1", "6.2831853",
         "--steps", "8", "--out", str(tmp_path / "traj.jsonl")]
    )
    assert rc == 0
    lines = (tmp_path / "traj.jsonl").read_text().strip().splitlines()
    assert len(lines) == 8
    first = json.loads(lines[0])
    rho0 = matrix_from_json(first["density"])
    geom = phase_geometry(3, 1)
    assert np.abs(rho0 - mub_projector(geom, 1, (0,)).matrix).max() < 1e-8
    rep = json.loads((tmp_path / "traj.jsonl.report.json").read_text())
    assert rep["trace_drift"] < 1e-8 and rep["purity_drift"] < 1e-8


def test_cli_evolve_constant_under_zero_hamiltonian(tmp_path, rng):
    rho = random_density(3, rng)
    state = write_json(tmp_path / "s.json", matrix_to_json(rho))
    hfile = write_json(tmp_path / "H.json", matrix_to_json(np.zeros((3, 3))))
    rc = main(
        ["evolve", "--p", "3", "--n", "1", "--input", state, "--hamiltonian", hfile,
         "--t0", "0", "--t1", "5", "--steps", "6", "--out", str(tmp_path / "t.jsonl")]
    )
    assert rc == 0
    lines = (tmp_path / "t.jsonl").read_text().strip().splitlines()
    for line in lines:
        rec = json.loads(line)
        assert np.abs(matrix_from_json(rec["density"]) - rho).max() < 1e-10


def test_cli_deterministic_given_seed(tmp_path):
    state = write_json(tmp_path / "r.json", {"random": "density"})
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for out in (out1, out2):
        rc = main(
            ["wigner", "--p", "3", "--n", "1", "--input", state,
             "--seed", "42", "--out", str(out)]
        )
        assert rc == 0
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_cli_written_table_round_trips(tmp_path, rng):
    # reading a written table and reconstructing matches the input state
    rho = random_density(4, rng)
    state = write_json(tmp_path / "s.json", matrix_to_json(rho))
    rc = main(
        ["wigner", "--p", "2", "--n", "2", "--input", state, "--out", str(tmp_path / "w")]
    )
    assert rc == 0
    table = wigner_table_from_json(json.loads((tmp_path / "w.json").read_text()))
    assert np.abs(reconstruct_density(table) - rho).max() < TOL
