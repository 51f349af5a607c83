#!/usr/bin/env python3
"""Regenerate the shipped rotor configuration files in data/.

Each rotor is a uniform steel shaft discretized into equal-length
elements, with a few rigid disks and two damped bearings. The node
counts are chosen so the 4-dof-per-node models hit the documented
system dimensions (8, 160, 236, 440, 796).
"""
import json
import pathlib

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"

STEEL = {"density": 7850.0, "youngs_modulus": 2.1e11}


def rotor(name, nodes, length, od, id_, disks, bearings, alpha=10.0, beta=1e-5):
    cfg = {
        "name": name,
        "nodes": [round(i * length / (nodes - 1), 12) for i in range(nodes)],
        "shaft_segments": [
            {
                "start_node": i,
                "end_node": i + 1,
                "outer_diameter": od,
                "inner_diameter": id_,
                **STEEL,
            }
            for i in range(nodes - 1)
        ],
        "disks": disks,
        "bearings": bearings,
        "rayleigh": {"alpha": alpha, "beta": beta},
    }
    return cfg


def disk(node, mass, ip):
    return {
        "node": node,
        "mass": mass,
        "polar_inertia": ip,
        "diametral_inertia": ip / 2.0,
    }


def bearing(node, k, c, kc=0.0):
    b = {
        "node": node,
        "stiffness": [[k, 0.0], [0.0, k]],
        "damping": [[c, 0.0], [0.0, c]],
    }
    if kc:
        b["cross_stiffness"] = [[0.0, kc], [-kc, 0.0]]
    return b


def main():
    DATA.mkdir(exist_ok=True)
    configs = {
        # smallest valid rotor, used by unit tests
        "tiny8.cfg": rotor(
            "tiny8", 2, 0.3, 0.02, 0.0,
            disks=[],
            bearings=[bearing(0, 1e6, 10.0), bearing(1, 1e6, 10.0)],
            alpha=1.0, beta=1e-6,
        ),
        # 40 nodes -> 160 dof: the workstation-scale benchmark rotor
        "desk160.cfg": rotor(
            "desk160", 40, 1.2, 0.04, 0.0,
            disks=[disk(13, 5.0, 0.05), disk(26, 8.0, 0.08)],
            bearings=[bearing(2, 5e6, 500.0), bearing(37, 5e6, 500.0)],
        ),
        # 59 nodes -> 236 dof
        "small236.cfg": rotor(
            "small236", 59, 1.5, 0.045, 0.0,
            disks=[disk(19, 6.0, 0.06), disk(39, 9.0, 0.09)],
            bearings=[bearing(3, 2.5e7, 600.0), bearing(55, 2.5e7, 600.0)],
        ),
        # 110 nodes -> 440 dof, cross-coupled bearings populate K1
        "fan440.cfg": rotor(
            "fan440", 110, 2.0, 0.06, 0.02,
            disks=[disk(20, 25.0, 0.5), disk(55, 15.0, 0.3), disk(90, 25.0, 0.5)],
            bearings=[bearing(5, 5e7, 2000.0, 5e5), bearing(104, 5e7, 2000.0, 5e5)],
        ),
        # 199 nodes -> 796 dof
        "lp796.cfg": rotor(
            "lp796", 199, 3.0, 0.08, 0.03,
            disks=[disk(30, 40.0, 1.2), disk(100, 30.0, 0.8), disk(170, 40.0, 1.2)],
            bearings=[bearing(8, 8e7, 4000.0), bearing(190, 8e7, 4000.0)],
        ),
    }
    for fname, cfg in configs.items():
        path = DATA / fname
        path.write_text(json.dumps(cfg, indent=2) + "\n")
        print(f"wrote {path} ({len(cfg['nodes'])} nodes, {4 * len(cfg['nodes'])} dof)")


if __name__ == "__main__":
    main()
