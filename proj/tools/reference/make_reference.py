#!/usr/bin/env python3
"""Regenerates basis files and reference fixtures with PySCF.

Usage: python3 tools/reference/make_reference.py [--repo ROOT]

Outputs:
  data/basis/{sto-3g,6-31g}.gbs           Gaussian94 basis files (H..Ne)
  tests/fixtures/<name>.ref               key/value reference data

Fixture format: one record per line, "<key> <n> <v1> ... <vn>", where the
values of matrices and 4-index tensors are row-major. Comment lines start
with '#'.
"""

import argparse
import pathlib

import numpy as np
from pyscf import __version__ as pyscf_version
from pyscf import cc, fci, gto, mp, scf

ELEMENTS = ["H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne"]
SHELL = {0: "S", 1: "P", 2: "D"}


def export_basis(name: str, path: pathlib.Path) -> None:
    lines = [f"! {name} exported from PySCF {pyscf_version}", "****"]
    for el in ELEMENTS:
        try:
            shells = gto.basis.load(name, el)
        except Exception:
            continue
        lines.append(f"{el}     0")
        for shell in shells:
            l = shell[0]
            prims = shell[1:]
            ncontr = len(prims[0]) - 1
            for c in range(ncontr):
                lines.append(f"{SHELL[l]}   {len(prims)}   1.00")
                for p in prims:
                    lines.append(f"  {p[0]:>20.10f}  {p[1 + c]:>16.10f}")
        lines.append("****")
    path.write_text("\n".join(lines) + "\n")


def record(out, key, values):
    arr = np.asarray(values, dtype=float).ravel()
    out.append(f"{key} {arr.size} " + " ".join(f"{v:.17g}" for v in arr))


def run_system(atom, basis, unit="Bohr", charge=0, with_fci=True, with_integrals=False):
    mol = gto.M(atom=atom, basis=basis, unit=unit, charge=charge, cart=True, verbose=0)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-13
    mf.conv_tol_grad = 1e-10
    mf.kernel()
    assert mf.converged
    out = [f"# PySCF {pyscf_version}, cart=True, basis {basis}, unit {unit}", f"# atom {atom}"]
    record(out, "n_basis", [mol.nao])
    record(out, "e_nuc", [mol.energy_nuc()])
    record(out, "e_hf", [mf.e_tot])
    record(out, "orbital_energies", mf.mo_energy)
    if with_integrals:
        record(out, "overlap", mol.intor("int1e_ovlp"))
        record(out, "kinetic", mol.intor("int1e_kin"))
        record(out, "nuclear", mol.intor("int1e_nuc"))
        record(out, "h_core", mf.get_hcore())
        record(out, "eri", mol.intor("int2e").reshape(mol.nao, mol.nao, mol.nao, mol.nao))
    if mol.nelectron >= 2 and mol.nao > mol.nelectron // 2:
        pt = mp.MP2(mf)
        pt.kernel()
        record(out, "e_mp2", [pt.e_corr])
        mycc = cc.CCSD(mf)
        mycc.conv_tol = 1e-12
        mycc.conv_tol_normt = 1e-10
        mycc.kernel()
        record(out, "e_ccsd", [mycc.e_corr])
    if with_fci:
        e_fci, _ = fci.FCI(mf).kernel()
        record(out, "e_fci", [e_fci])
    # Spin-orbital antisymmetrized elements <pq||rs> of the two lowest
    # spatial MOs; gauge invariant for this selection.
    if mol.nao >= 2:
        C = mf.mo_coeff
        eri_mo = np.einsum("pi,qj,rk,sl,pqrs->ijkl", C, C, C, C, mol.intor("int2e"), optimize=True)
        J00 = eri_mo[0, 0, 0, 0]
        J01 = eri_mo[0, 0, 1, 1]
        K01 = eri_mo[0, 1, 0, 1]
        record(out, "mo_coulomb_00", [J00])
        record(out, "mo_coulomb_01", [J01])
        record(out, "mo_exchange_01", [K01])
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repo", default=str(pathlib.Path(__file__).resolve().parents[2]))
    args = ap.parse_args()
    root = pathlib.Path(args.repo)
    (root / "data/basis").mkdir(parents=True, exist_ok=True)
    fixtures = root / "tests/fixtures"
    fixtures.mkdir(parents=True, exist_ok=True)

    export_basis("sto-3g", root / "data/basis/sto-3g.gbs")
    export_basis("6-31g", root / "data/basis/6-31g.gbs")

    systems = {
        "h2_sto3g": dict(atom="H 0 0 0; H 0 0 1.4", basis="sto-3g", with_integrals=True),
        "h2_sto3g_074A": dict(atom="H 0 0 0; H 0 0 0.74", basis="sto-3g", unit="Angstrom"),
        "h2_631g": dict(atom="H 0 0 0; H 0 0 1.4", basis="6-31g", with_integrals=True),
        "he_sto3g": dict(atom="He 0 0 0", basis="sto-3g"),
        "h2o_sto3g": dict(
            atom="O 0 0 0; H 0 1.430429 1.107157; H 0 -1.430429 1.107157",
            basis="sto-3g",
            with_integrals=True,
        ),
        "lih_sto3g": dict(atom="Li 0 0 0; H 0 0 3.015", basis="sto-3g"),
    }
    for name, kw in systems.items():
        out = run_system(**kw)
        (fixtures / f"{name}.ref").write_text("\n".join(out) + "\n")
        print("wrote", name)


if __name__ == "__main__":
    main()
