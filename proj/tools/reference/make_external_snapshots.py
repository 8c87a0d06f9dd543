#!/usr/bin/env python3
"""Writes an externally produced snapshot set for the H4 breathing trajectory.

Usage: python3 tools/reference/make_external_snapshots.py [--repo ROOT] [--nodes D]

Each node is computed with PySCF (RHF + RCCSD, spin-adapted amplitudes
converted to spin orbitals) and written in the ccinterp snapshot container
format without a manifest; ingestion builds the manifest. Orbital signs and
phases are whatever PySCF returns.
"""

import argparse
import math
import pathlib
import struct

import numpy as np
from pyscf import __version__ as pyscf_version
from pyscf import cc, gto, scf
from pyscf.cc import addons
from pyscf.gto.basis import parse_gaussian

MAGIC = "ccinterp-snapshot"
LAYOUT = "t1[a,i] t2[a,b,i,j] spin-orbitals p->(2p alpha, 2p+1 beta), occupied first"

# Must match data/trajectories/h4_breathing.traj.
GAMMA0 = np.array([[0, 0, -2.7], [0, 0, -0.9], [0, 0, 0.9], [0, 0, 2.7]], dtype=float)
MODE_C, MODE_OMEGA = 0.3, 0.25
MODE_ZETA = np.array([[0, 0, -1.5], [0, 0, -0.5], [0, 0, 0.5], [0, 0, 1.5]], dtype=float)


def fnv1a64(data: bytes) -> int:
    h = 0xCBF29CE484222325
    for b in data:
        h ^= b
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


def chebyshev_nodes(d):
    return sorted(0.5 * (1.0 + math.cos((2 * k + 1) * math.pi / (2 * d))) for k in range(d))


def geometry(mu):
    return GAMMA0 + MODE_C * math.sin(2.0 * math.pi * MODE_OMEGA * mu) * MODE_ZETA


def exact(v):
    return f"{v:.17g}"


def element_block(basis_text, symbol):
    for block in basis_text.split("****"):
        lines = [l for l in block.strip().splitlines() if l.strip() and not l.startswith("!")]
        if lines and lines[0].split()[0] == symbol:
            return "\n".join(lines)
    raise KeyError(symbol)


def snapshot_bytes(mu, xyz, basis_text, basis_checksum):
    basis = {"H": parse_gaussian.parse(element_block(basis_text, "H"))}
    mol = gto.M(atom=[("H", tuple(r)) for r in xyz], basis=basis, unit="Bohr", cart=True, verbose=0)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-14
    mf.conv_tol_grad = 1e-11
    mf.kernel()
    assert mf.converged
    mycc = cc.RCCSD(mf)
    mycc.conv_tol = 1e-14
    mycc.conv_tol_normt = 1e-13
    mycc.max_cycle = 500
    mycc.kernel()
    assert mycc.converged

    nocc = mol.nelectron // 2
    nb = mol.nao
    t1s = addons.spatial2spin(mycc.t1)  # [i, a]
    t2s = addons.spatial2spin(mycc.t2)  # [i, j, a, b]
    t1 = np.ascontiguousarray(t1s.T)
    t2 = np.ascontiguousarray(t2s.transpose(2, 3, 0, 1))
    no, nv = 2 * nocc, 2 * (nb - nocc)
    e = mf.mo_energy

    header = [
        MAGIC,
        "schema_version 1",
        f"mu {exact(mu)}",
        f"n_electrons {mol.nelectron}",
        f"n_basis {nb}",
        f"n_occ_so {no}",
        f"n_virt_so {nv}",
        "basis_name sto-3g",
        f"basis_checksum {basis_checksum:016x}",
        f"e_hf {exact(mf.e_tot)}",
        f"e_corr {exact(mycc.e_corr)}",
        f"gap {exact(e[nocc] - e[nocc - 1])}",
        f"amplitude_layout {LAYOUT}",
        f"config external PySCF {pyscf_version} RHF+RCCSD",
    ]
    header += [f"atom 1 {exact(r[0])} {exact(r[1])} {exact(r[2])}" for r in xyz]
    payload = b""
    for name, arr in [
        ("overlap", mf.get_ovlp()),
        ("coefficients", mf.mo_coeff),
        ("orbital_energies", e),
        ("t1", t1),
        ("t2", t2),
    ]:
        arr = np.ascontiguousarray(arr, dtype="<f8")
        header.append(f"array {name} {len(payload)} " + " ".join(str(n) for n in arr.shape))
        payload += arr.tobytes()
    header.append("end_header")
    return ("\n".join(header) + "\n").encode() + payload


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repo", default=pathlib.Path(__file__).resolve().parents[2], type=pathlib.Path)
    ap.add_argument("--nodes", default=6, type=int)
    args = ap.parse_args()

    basis_bytes = (args.repo / "data/basis/sto-3g.gbs").read_bytes()
    checksum = fnv1a64(basis_bytes)
    out = args.repo / f"tests/fixtures/external_h4_d{args.nodes}"
    out.mkdir(parents=True, exist_ok=True)
    for k, mu in enumerate(chebyshev_nodes(args.nodes)):
        (out / f"pyscf_{k:02d}.snap").write_bytes(
            snapshot_bytes(mu, geometry(mu), basis_bytes.decode(), checksum))
    print(f"wrote {args.nodes} snapshots to {out}")


if __name__ == "__main__":
    main()
