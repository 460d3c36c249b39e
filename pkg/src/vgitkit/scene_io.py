"""Scene file loading, validation and canonical serialization.

The format is JSON, schema version "1".  Unknown fields are rejected and
every diagnostic names the offending field with a JSON-path prefix.  All
rationals cross the boundary as strings like "3" or "1/2" in lowest
terms; nothing in a scene file is ever a float.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .core import Linearization, Scene, SceneError, WeightedPoint
from .hilb import HilbPoint
from .strata import ComponentAnnotatedPoint, FixedComponent, validate_component

SCHEMA_VERSION = "1"


class SceneFileError(SceneError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


@dataclass(frozen=True)
class LoadedScene:
    scene: Scene
    components: Mapping[str, FixedComponent]
    annotations: Mapping[str, tuple]  # point name -> component ids
    hilb_points: tuple

    def annotated_point(self, name: str) -> ComponentAnnotatedPoint:
        return ComponentAnnotatedPoint(
            point=self.scene.point(name),
            components=self.annotations[name],
        )

    def hilb_point(self, name: str) -> HilbPoint:
        for z in self.hilb_points:
            if z.name == name:
                return z
        raise SceneError(f"no hilb point named {name!r}")


def _expect(obj, typ, path, what):
    if not isinstance(obj, typ) or isinstance(obj, bool) and typ is int:
        raise SceneFileError(path, f"expected {what}")
    return obj


def _expect_keys(obj: dict, path: str, required: dict, optional: dict = ()) -> None:
    optional = dict(optional)
    for key in obj:
        if key not in required and key not in optional:
            raise SceneFileError(f"{path}.{key}", "unknown field")
    for key in required:
        if key not in obj:
            raise SceneFileError(path, f"missing field {key!r}")


def _int_vec(obj, path) -> tuple:
    _expect(obj, list, path, "a list of integers")
    out = []
    for i, x in enumerate(obj):
        if not isinstance(x, int) or isinstance(x, bool):
            raise SceneFileError(f"{path}[{i}]", "expected an integer")
        out.append(x)
    return tuple(out)


def parse_rational(text, path="rational") -> Fraction:
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise SceneFileError(path, "expected a rational as 'p/q' or 'n'")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise SceneFileError(path, f"malformed rational {text!r}") from None


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


def load_scene_obj(obj, source: str = "<scene>") -> LoadedScene:
    _expect(obj, dict, source, "a JSON object")
    _expect_keys(
        obj,
        source,
        required={"schema_version": 1, "rank": 1, "base_weights": 1,
                  "linearizations": 1, "points": 1},
        optional={"components": 1, "hilb": 1},
    )
    if obj["schema_version"] != SCHEMA_VERSION:
        raise SceneFileError(
            f"{source}.schema_version",
            f"unsupported version {obj['schema_version']!r} (expected {SCHEMA_VERSION!r})",
        )
    rank = obj["rank"]
    if not isinstance(rank, int) or isinstance(rank, bool) or rank < 1:
        raise SceneFileError(f"{source}.rank", "expected a positive integer")

    base = []
    _expect(obj["base_weights"], list, f"{source}.base_weights", "a list")
    for i, w in enumerate(obj["base_weights"]):
        v = _int_vec(w, f"{source}.base_weights[{i}]")
        if len(v) != rank:
            raise SceneFileError(f"{source}.base_weights[{i}]", f"length {len(v)} != rank {rank}")
        base.append(v)

    lins = []
    _expect(obj["linearizations"], list, f"{source}.linearizations", "a list")
    seen_lin = set()
    for i, entry in enumerate(obj["linearizations"]):
        path = f"{source}.linearizations[{i}]"
        _expect(entry, dict, path, "an object")
        _expect_keys(entry, path, required={"name": 1, "hm_sanctioned": 1})
        name = _expect(entry["name"], str, f"{path}.name", "a string")
        if name in seen_lin:
            raise SceneFileError(f"{path}.name", "duplicate")
        seen_lin.add(name)
        flag = entry["hm_sanctioned"]
        if not isinstance(flag, bool):
            raise SceneFileError(f"{path}.hm_sanctioned", "expected a boolean")
        lins.append(Linearization(name=name, hm_sanctioned=flag))

    points = []
    annotations = {}
    _expect(obj["points"], list, f"{source}.points", "a list")
    seen_pt = set()
    for i, entry in enumerate(obj["points"]):
        path = f"{source}.points[{i}]"
        _expect(entry, dict, path, "an object")
        _expect_keys(entry, path, required={"name": 1, "stratum": 1, "weights": 1},
                     optional={"components": 1})
        name = _expect(entry["name"], str, f"{path}.name", "a string")
        if name in seen_pt:
            raise SceneFileError(f"{path}.name", "duplicate")
        seen_pt.add(name)
        stratum = []
        _expect(entry["stratum"], list, f"{path}.stratum", "a list of indices")
        for j, idx in enumerate(entry["stratum"]):
            if not isinstance(idx, int) or isinstance(idx, bool):
                raise SceneFileError(f"{path}.stratum[{j}]", "expected an integer index")
            if not 0 <= idx < len(base):
                raise SceneFileError(f"{path}.stratum[{j}]", f"index {idx} out of range")
            stratum.append(idx)
        weights = {}
        _expect(entry["weights"], dict, f"{path}.weights", "an object")
        for lname, chars in entry["weights"].items():
            wpath = f"{path}.weights.{lname}"
            if lname not in seen_lin:
                raise SceneFileError(wpath, "unknown linearization")
            _expect(chars, list, wpath, "a list of characters")
            if not chars:
                raise SceneFileError(wpath, "weight set must be non-empty")
            parsed = []
            for j, c in enumerate(chars):
                v = _int_vec(c, f"{wpath}[{j}]")
                if len(v) != rank:
                    raise SceneFileError(f"{wpath}[{j}]", f"length {len(v)} != rank {rank}")
                parsed.append(v)
            weights[lname] = parsed
        if "components" in entry:
            ids = []
            _expect(entry["components"], list, f"{path}.components", "a list of ids")
            for j, cid in enumerate(entry["components"]):
                ids.append(_expect(cid, str, f"{path}.components[{j}]", "a string"))
            if not ids:
                raise SceneFileError(f"{path}.components", "must be non-empty when present")
            annotations[name] = tuple(ids)
        points.append((name, stratum, weights))

    try:
        scene = Scene.build(rank, base, lins, points)
    except SceneError as exc:
        raise SceneFileError(source, str(exc)) from None

    components = {}
    if "components" in obj:
        _expect(obj["components"], list, f"{source}.components", "a list")
        for i, entry in enumerate(obj["components"]):
            path = f"{source}.components[{i}]"
            _expect(entry, dict, path, "an object")
            _expect_keys(entry, path, required={"id": 1, "stratum": 1, "c": 1})
            cid = _expect(entry["id"], str, f"{path}.id", "a string")
            if cid in components:
                raise SceneFileError(f"{path}.id", "duplicate")
            stratum = []
            for j, idx in enumerate(_expect(entry["stratum"], list, f"{path}.stratum", "a list")):
                if not isinstance(idx, int) or isinstance(idx, bool) or not 0 <= idx < len(base):
                    raise SceneFileError(f"{path}.stratum[{j}]", "bad index")
                stratum.append(idx)
            cmap = {}
            _expect(entry["c"], dict, f"{path}.c", "an object")
            for lname, cvec in entry["c"].items():
                if lname not in seen_lin:
                    raise SceneFileError(f"{path}.c.{lname}", "unknown linearization")
                v = _int_vec(cvec, f"{path}.c.{lname}")
                if len(v) != rank:
                    raise SceneFileError(f"{path}.c.{lname}", f"length {len(v)} != rank {rank}")
                cmap[lname] = v
            comp = FixedComponent(id=cid, stratum=tuple(sorted(set(stratum))), c=cmap)
            try:
                validate_component(scene, comp)
            except SceneError as exc:
                raise SceneFileError(path, str(exc)) from None
            components[cid] = comp
    for pname, ids in annotations.items():
        for cid in ids:
            if cid not in components:
                raise SceneFileError(
                    f"{source}.points", f"point {pname!r} references unknown component {cid!r}"
                )

    hilb_points = []
    if "hilb" in obj:
        _expect(obj["hilb"], list, f"{source}.hilb", "a list")
        seen_h = set()
        for i, entry in enumerate(obj["hilb"]):
            path = f"{source}.hilb[{i}]"
            _expect(entry, dict, path, "an object")
            _expect_keys(entry, path, required={"name": 1, "d": 1, "scenarios": 1})
            name = _expect(entry["name"], str, f"{path}.name", "a string")
            if name in seen_h:
                raise SceneFileError(f"{path}.name", "duplicate")
            seen_h.add(name)
            d = entry["d"]
            if not isinstance(d, int) or isinstance(d, bool) or d < 1:
                raise SceneFileError(f"{path}.d", "expected a positive integer")
            scenarios = []
            _expect(entry["scenarios"], list, f"{path}.scenarios", "a list")
            for j, sc in enumerate(entry["scenarios"]):
                spath = f"{path}.scenarios[{j}]"
                _expect(sc, dict, spath, "an object")
                _expect_keys(sc, spath, required={"cone_h": 1, "tau": 1, "support": 1})
                cone_h = [
                    _int_vec(h, f"{spath}.cone_h[{k}]")
                    for k, h in enumerate(_expect(sc["cone_h"], list, f"{spath}.cone_h", "a list"))
                ]
                tau = _int_vec(sc["tau"], f"{spath}.tau")
                support = []
                for k, sup in enumerate(_expect(sc["support"], list, f"{spath}.support", "a list")):
                    kpath = f"{spath}.support[{k}]"
                    _expect(sup, dict, kpath, "an object")
                    _expect_keys(sup, kpath, required={"id": 1, "n_p": 1, "c": 1})
                    sid = _expect(sup["id"], str, f"{kpath}.id", "a string")
                    n_p = sup["n_p"]
                    if not isinstance(n_p, int) or isinstance(n_p, bool) or n_p < 1:
                        raise SceneFileError(f"{kpath}.n_p", "expected a positive integer")
                    support.append((sid, n_p, _int_vec(sup["c"], f"{kpath}.c")))
                scenarios.append((cone_h, tau, support))
            try:
                hilb_points.append(HilbPoint.build(name, d, rank, scenarios))
            except SceneError as exc:
                raise SceneFileError(path, str(exc)) from None

    return LoadedScene(
        scene=scene,
        components=components,
        annotations=annotations,
        hilb_points=tuple(hilb_points),
    )


def load_scene(path: str) -> LoadedScene:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SceneFileError(path, f"not valid JSON: {exc}") from None
    return load_scene_obj(obj, source=path)


def scene_to_obj(loaded: LoadedScene) -> dict:
    """Canonical JSON object; load(scene_to_obj(x)) reproduces x."""
    scene = loaded.scene
    obj = {
        "schema_version": SCHEMA_VERSION,
        "rank": scene.rank,
        "base_weights": [list(w) for w in scene.base_weights],
        "linearizations": [
            {"name": l.name, "hm_sanctioned": l.hm_sanctioned}
            for l in scene.linearizations
        ],
        "points": [],
    }
    for p in scene.points:
        entry = {
            "name": p.name,
            "stratum": list(p.stratum),
            "weights": {
                lname: sorted(list(c) for c in chars)
                for lname, chars in sorted(p.weights.items())
            },
        }
        if p.name in loaded.annotations:
            entry["components"] = list(loaded.annotations[p.name])
        obj["points"].append(entry)
    if loaded.components:
        obj["components"] = [
            {
                "id": comp.id,
                "stratum": list(comp.stratum),
                "c": {lname: list(v) for lname, v in sorted(comp.c.items())},
            }
            for comp in sorted(loaded.components.values(), key=lambda c: c.id)
        ]
    if loaded.hilb_points:
        obj["hilb"] = [
            {
                "name": z.name,
                "d": z.d,
                "scenarios": [
                    {
                        "cone_h": [list(h) for h in s.cone.h_rep],
                        "tau": list(s.tau),
                        "support": [
                            {"id": pid, "n_p": n_p, "c": list(c)}
                            for pid, n_p, c in s.support
                        ],
                    }
                    for s in z.scenarios
                ],
            }
            for z in loaded.hilb_points
        ]
    return obj
