"""Batch front end: read a JSON job, run its commands, print a report.

A job document is one JSON object::

    {
      "field": "q",                      # or "fp:P", or the modulus P
      "complexes":  {name: {...}},
      "algebras":   {name: {...}},
      "coalgebras": {name: {...}},
      "modules":    {name: {...}},
      "comodules":  {name: {...}},
      "lie":        {name: {...}},
      "gluings":    {name: {...}},
      "commands":   [{"op": ..., "args": {...}, "range": [lo, hi]}, ...]
    }

Scalars are integers or strings ``"p/q"``.  Objects are given either by
tables (``basis``, ``d``, ``product``/``coproduct``/``action``/``coaction``/
``bracket``) or by a ``builder`` with its parameters.  See the README for
every field.

Exit status: 0 when every command passes with a certificate, 1 when a check
fails or a result is uncertified (unless ``--allow-uncertified``), 2 on an
input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from . import __version__
from .bar import (Policy, BarComplex, bar_bimodule, cobar, completeness_map, cotensor,
                  interchange_check, koszul_dual, roundtrip_check)
from .chain import ChainComplex, betti_table, label_name, validate
from .dg import (DGAlgebra, DGCoalgebra, DGComodule, DGModule, exterior, ideal_module,
                 is_copositive, positivity_failures,
                 regular_comodule, regular_module, square_zero, trivial_comodule,
                 trivial_module, truncated_polynomial, truncated_tensor, unit_algebra,
                 validate_algebra, validate_coalgebra, validate_comodule, validate_module)
from .errors import MalformedInputError, PositivityError
from .field import Field, ModP
from .interval import (GluingDiagram, circle_homology, coexcision_check, compact_support,
                       excision_check, graded_betti, poincare_check)
from .jsonpos import Located
from .lie import (DGLie, abelian, ce_homology, heisenberg, lie_excision_check,
                  monoidality_check, validate_lie)

OPS = ("homology", "bar", "koszul-dual", "cobar", "cotensor", "roundtrip", "completeness",
       "interchange", "excision", "coexcision", "poincare", "circle", "compact-support",
       "ce", "ce-monoidality", "lie-excision", "validate")

SECTIONS = ("complexes", "algebras", "coalgebras", "modules", "comodules", "lie", "gluings")

TOP_KEYS = ("field",) + SECTIONS + ("commands",)

# allowed keys per object kind, for table form and for each builder
TABLE_KEYS = {
    "complexes": {"basis", "d"},
    "algebras": {"basis", "unit", "d", "product"},
    "coalgebras": {"basis", "counit", "d", "coproduct"},
    "modules": {"algebra", "side", "basis", "d", "action"},
    "comodules": {"coalgebra", "side", "basis", "d", "coaction"},
    "lie": {"basis", "d", "bracket"},
    "gluings": {"manifold", "cuts", "coefficients", "positions"},
}

BUILDERS = {
    "algebras": {
        "unit": set(),
        "exterior": {"generators"},
        "truncated-polynomial": {"generator", "nilpotency"},
        "square-zero": {"generators"},
        "truncated-tensor": {"generators", "max_length"},
    },
    "coalgebras": {"koszul-dual": {"algebra"}},
    "modules": {"regular": {"algebra", "side"}, "trivial": {"algebra", "side"},
                "ideal": {"algebra", "side"}, "bar-bimodule": {"algebra"}},
    "comodules": {"regular": {"coalgebra", "side"}, "trivial": {"coalgebra", "side"}},
    "lie": {"abelian": {"dim", "degree"}, "heisenberg": set()},
}

# args per op: key -> section it refers to (None for plain values)
OP_ARGS = {
    "homology": {"complex": "complexes", "algebra": "algebras", "coalgebra": "coalgebras"},
    "bar": {"algebra": "algebras", "left": "modules", "right": "modules"},
    "koszul-dual": {"algebra": "algebras"},
    "cobar": {"coalgebra": "coalgebras"},
    "cotensor": {"coalgebra": "coalgebras", "left": "comodules", "right": "comodules"},
    "roundtrip": {"algebra": "algebras"},
    "completeness": {"algebra": "algebras", "module": "modules"},
    "interchange": {"algebra": "algebras", "left": "modules"},
    "excision": {"gluing": "gluings", "alternative": "gluings"},
    "coexcision": {"coalgebra": "coalgebras", "gluing": "gluings", "alternative": "gluings"},
    "poincare": {"algebra": "algebras"},
    "circle": {"algebra": "algebras"},
    "compact-support": {"algebra": "algebras", "manifold": None},
    "ce": {"lie": "lie", "weight_cap": None},
    "ce-monoidality": {"left": "lie", "right": "lie", "weight_cap": None},
    "lie-excision": {"lie": "lie", "manifold": None, "weight_cap": None},
    "validate": {"complex": "complexes", "algebra": "algebras", "coalgebra": "coalgebras",
                 "module": "modules", "comodule": "comodules", "lie": "lie"},
}

REQUIRED_ARGS = {
    "homology": (), "bar": ("algebra",), "koszul-dual": ("algebra",), "cobar": ("coalgebra",),
    "cotensor": ("coalgebra",), "roundtrip": ("algebra",), "completeness": ("algebra",),
    "interchange": ("algebra",), "excision": ("gluing",), "coexcision": ("coalgebra", "gluing"),
    "poincare": ("algebra",), "circle": ("algebra",), "compact-support": ("algebra", "manifold"),
    "ce": ("lie", "weight_cap"), "ce-monoidality": ("left", "right", "weight_cap"),
    "lie-excision": ("lie", "manifold", "weight_cap"), "validate": (),
}


class JobError(MalformedInputError):
    """Input error, located in the job document when possible."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


# ---------------------------------------------------------------------------
# parsing


@dataclass
class JobSpec:
    field: str
    objects: dict = dc_field(default_factory=dict)
    commands: list = dc_field(default_factory=list)

    def to_dict(self) -> dict:
        out: dict = {"field": self.field}
        for s in SECTIONS:
            if self.objects.get(s):
                out[s] = self.objects[s]
        out["commands"] = self.commands
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def field_obj(self) -> Field:
        return Field.parse(self.field)


class _Parser:
    def __init__(self, text: str):
        try:
            self.doc = Located(text)
        except json.JSONDecodeError as e:
            raise JobError(f"invalid JSON: {e.msg}", e.lineno, e.colno) from None

    def error(self, msg, path, key=False):
        line, col = self.doc.where(path, key)
        return JobError(msg, line, col)

    def keys(self, obj, path, allowed, required=()):
        if not isinstance(obj, dict):
            raise self.error("expected an object", path)
        for k in obj:
            if k not in allowed:
                raise self.error(f"unknown field {k!r}", path + (k,), key=True)
        for k in required:
            if k not in obj:
                raise self.error(f"missing field {k!r}", path)

    def integer(self, v, path, lo=None):
        if not isinstance(v, int) or isinstance(v, bool):
            raise self.error("expected an integer", path)
        if lo is not None and v < lo:
            raise self.error(f"expected an integer >= {lo}", path)
        return v

    def string(self, v, path):
        if not isinstance(v, str):
            raise self.error("expected a string", path)
        return v

    def scalar(self, v, path):
        if isinstance(v, bool):
            raise self.error("expected a scalar", path)
        if isinstance(v, int):
            return v
        if isinstance(v, str):
            try:
                q = Fraction(v)
            except (ValueError, ZeroDivisionError):
                raise self.error(f"bad scalar {v!r}", path) from None
            return str(q)
        raise self.error("expected an integer or a string \"p/q\"", path)

    def listof(self, v, path):
        if not isinstance(v, list):
            raise self.error("expected a list", path)
        return v

    # -- pieces -------------------------------------------------------------

    def basis(self, v, path):
        out = []
        seen = set()
        for i, b in enumerate(self.listof(v, path)):
            p = path + (i,)
            self.keys(b, p, {"name", "degree"}, ("name", "degree"))
            name = self.string(b["name"], p + ("name",))
            if name in seen:
                raise self.error(f"repeated basis element {name!r}", p + ("name",))
            seen.add(name)
            out.append({"name": name, "degree": self.integer(b["degree"], p + ("degree",))})
        return out

    def name_in(self, v, path, names):
        v = self.string(v, path)
        if v not in names:
            raise self.error(f"unknown basis element {v!r}", path)
        return v

    def terms(self, v, path, names, fields=("name",)):
        out = []
        for i, t in enumerate(self.listof(v, path)):
            p = path + (i,)
            self.keys(t, p, set(fields) | {"coeff"}, fields + ("coeff",))
            e = {f: self.name_in(t[f], p + (f,), names[j] if isinstance(names, tuple) else names)
                 for j, f in enumerate(fields)}
            e["coeff"] = self.scalar(t["coeff"], p + ("coeff",))
            out.append(e)
        return out

    def diff(self, v, path, names):
        out = []
        for i, t in enumerate(self.listof(v, path)):
            p = path + (i,)
            self.keys(t, p, {"from", "to", "coeff"}, ("from", "to", "coeff"))
            out.append({"from": self.name_in(t["from"], p + ("from",), names),
                        "to": self.name_in(t["to"], p + ("to",), names),
                        "coeff": self.scalar(t["coeff"], p + ("coeff",))})
        return out

    def generators(self, v, path):
        return self.basis(v, path)

    # -- objects ------------------------------------------------------------

    def parse(self) -> JobSpec:
        top = self.doc.value
        self.keys(top, (), set(TOP_KEYS))
        f = top.get("field", "q")
        fpath = ("field",)
        if isinstance(f, int) and not isinstance(f, bool):
            f = f"fp:{f}"
        if not isinstance(f, str):
            raise self.error("field must be \"q\", \"fp:P\" or a prime modulus", fpath)
        try:
            fld = Field.parse(f)
        except MalformedInputError as e:
            raise self.error(str(e), fpath) from None
        spec = JobSpec("q" if fld.is_rational else f"fp:{fld.p}")
        self.names = {s: set(top.get(s, {}) or {}) if isinstance(top.get(s, {}), dict) else set()
                      for s in SECTIONS}
        for s in SECTIONS:
            if s not in top:
                continue
            sec = top[s]
            if not isinstance(sec, dict):
                raise self.error("expected an object of named definitions", (s,))
            spec.objects[s] = {name: self.obj(s, d, (s, name)) for name, d in sec.items()}
        cmds = self.listof(top.get("commands", []), ("commands",))
        spec.commands = [self.command(c, ("commands", i)) for i, c in enumerate(cmds)]
        return spec

    def ref(self, v, path, section):
        v = self.string(v, path)
        if v not in self.names[section]:
            raise self.error(f"dangling reference {v!r}: no such entry in {section!r}", path)
        return v

    def obj(self, s, d, path):
        if not isinstance(d, dict):
            raise self.error("expected an object", path)
        if "builder" in d:
            b = d["builder"]
            table = BUILDERS.get(s, {})
            if b not in table:
                raise self.error(f"unknown builder {b!r}", path + ("builder",))
            self.keys(d, path, table[b] | {"builder"}, tuple(sorted(table[b] - {"side", "degree"})))
            return self.builder_args(s, b, d, path)
        allowed = TABLE_KEYS[s]
        if s == "gluings":
            self.keys(d, path, allowed, ("manifold", "coefficients"))
            return self.gluing(d, path)
        req = {"complexes": ("basis",), "algebras": ("basis", "unit"),
               "coalgebras": ("basis", "counit"), "modules": ("algebra", "side", "basis"),
               "comodules": ("coalgebra", "side", "basis"), "lie": ("basis",)}[s]
        self.keys(d, path, allowed, req)
        out: dict = {}
        if "algebra" in d:
            out["algebra"] = self.ref(d["algebra"], path + ("algebra",), "algebras")
        if "coalgebra" in d:
            out["coalgebra"] = self.ref(d["coalgebra"], path + ("coalgebra",), "coalgebras")
        if "side" in d:
            out["side"] = self.side(d["side"], path + ("side",), s == "modules")
        out["basis"] = self.basis(d["basis"], path + ("basis",))
        names = {b["name"] for b in out["basis"]}
        if "unit" in d:
            out["unit"] = self.name_in(d["unit"], path + ("unit",), names)
        if "counit" in d:
            out["counit"] = self.name_in(d["counit"], path + ("counit",), names)
        out["d"] = self.diff(d.get("d", []), path + ("d",), names)
        if s in ("algebras", "lie"):
            key = "product" if s == "algebras" else "bracket"
            out[key] = self.binary(d.get(key, []), path + (key,), names, names)
        if s == "coalgebras":
            out["coproduct"] = self.split(d.get("coproduct", []), path + ("coproduct",),
                                          names, names, names)
        if s == "modules":
            # action entries name an algebra element and a module element
            out["action"] = self.action(d.get("action", []), path + ("action",), names)
        if s == "comodules":
            out["coaction"] = self.coaction(d.get("coaction", []), path + ("coaction",), names)
        return out

    def side(self, v, path, bimodule_ok):
        v = self.string(v, path)
        allowed = ("left", "right", "bimodule") if bimodule_ok else ("left", "right")
        if v not in allowed:
            raise self.error(f"side must be one of {', '.join(allowed)}", path)
        return v

    def binary(self, v, path, lnames, rnames, onames=None):
        onames = rnames if onames is None else onames
        out = []
        for i, t in enumerate(self.listof(v, path)):
            p = path + (i,)
            self.keys(t, p, {"left", "right", "result"}, ("left", "right", "result"))
            out.append({"left": self.name_in(t["left"], p + ("left",), lnames),
                        "right": self.name_in(t["right"], p + ("right",), rnames),
                        "result": self.terms(t["result"], p + ("result",), onames)})
        return out

    def split(self, v, path, names, lnames, rnames):
        out = []
        for i, t in enumerate(self.listof(v, path)):
            p = path + (i,)
            self.keys(t, p, {"of", "result"}, ("of", "result"))
            out.append({"of": self.name_in(t["of"], p + ("of",), names),
                        "result": self.terms(t["result"], p + ("result",), (lnames, rnames),
                                             ("left", "right"))})
        return out

    def action(self, v, path, names):
        # algebra element names are checked once the algebra is built
        out = []
        for i, t in enumerate(self.listof(v, path)):
            p = path + (i,)
            self.keys(t, p, {"element", "on", "result"}, ("element", "on", "result"))
            out.append({"element": self.string(t["element"], p + ("element",)),
                        "on": self.name_in(t["on"], p + ("on",), names),
                        "result": self.terms(t["result"], p + ("result",), names)})
        return out

    def coaction(self, v, path, names):
        out = []
        for i, t in enumerate(self.listof(v, path)):
            p = path + (i,)
            self.keys(t, p, {"of", "result"}, ("of", "result"))
            res = []
            for j, r in enumerate(self.listof(t["result"], p + ("result",))):
                q = p + ("result", j)
                self.keys(r, q, {"coalgebra", "comodule", "coeff"},
                          ("coalgebra", "comodule", "coeff"))
                res.append({"coalgebra": self.string(r["coalgebra"], q + ("coalgebra",)),
                            "comodule": self.name_in(r["comodule"], q + ("comodule",), names),
                            "coeff": self.scalar(r["coeff"], q + ("coeff",))})
            out.append({"of": self.name_in(t["of"], p + ("of",), names), "result": res})
        return out

    def manifold(self, v, path):
        if v in ("interval", "circle"):
            return v
        if isinstance(v, list):
            for i, c in enumerate(v):
                if c != "interval":
                    if not (isinstance(c, list) and len(c) == 2
                            and all(isinstance(x, str) for x in c)):
                        raise self.error("a component is \"interval\" or a pair of boundary "
                                         "point names", path + (i,))
            return v
        raise self.error("manifold must be \"interval\", \"circle\" or a list of components",
                         path)

    def gluing(self, d, path):
        out = {"manifold": self.manifold(d["manifold"], path + ("manifold",)),
               "coefficients": self.ref(d["coefficients"], path + ("coefficients",),
                                        "algebras")}
        if "cuts" in d:
            out["cuts"] = self.integer(d["cuts"], path + ("cuts",), 0)
        if "positions" in d:
            pos = [self.scalar(x, path + ("positions", i))
                   for i, x in enumerate(self.listof(d["positions"], path + ("positions",)))]
            out["positions"] = pos
            if "cuts" in out and out["cuts"] != len(pos):
                raise self.error("cuts disagrees with the number of positions", path + ("cuts",))
        return out

    def builder_args(self, s, b, d, path):
        out: dict = {"builder": b}
        for k in sorted(d):
            if k == "builder":
                continue
            p = path + (k,)
            v = d[k]
            if k == "generators":
                out[k] = self.generators(v, p)
            elif k == "generator":
                if not isinstance(v, dict):
                    raise self.error("expected {\"name\", \"degree\"}", p)
                out[k] = self.generators([v], p)[0]
            elif k in ("nilpotency", "max_length", "dim"):
                out[k] = self.integer(v, p, 0)
            elif k == "degree":
                out[k] = self.integer(v, p)
            elif k == "algebra":
                out[k] = self.ref(v, p, "algebras")
            elif k == "coalgebra":
                out[k] = self.ref(v, p, "coalgebras")
            elif k == "side":
                out[k] = self.side(v, p, s == "modules")
        return out

    def command(self, c, path):
        self.keys(c, path, {"op", "args", "range"}, ("op",))
        op = self.string(c["op"], path + ("op",))
        if op not in OPS:
            raise self.error(f"unknown op {op!r}", path + ("op",))
        args = c.get("args", {})
        allowed = OP_ARGS[op]
        self.keys(args, path + ("args",), set(allowed), REQUIRED_ARGS[op])
        out_args = {}
        for k in args:
            p = path + ("args", k)
            sec = allowed[k]
            if sec is not None:
                out_args[k] = self.ref(args[k], p, sec)
            elif k == "weight_cap":
                out_args[k] = self.integer(args[k], p, 0)
            elif k == "manifold":
                out_args[k] = self.manifold(args[k], p)
        if op == "homology" and len(out_args) != 1:
            raise self.error("homology takes exactly one of complex, algebra, coalgebra",
                             path + ("args",))
        if op == "validate" and len(out_args) != 1:
            raise self.error("validate takes exactly one object", path + ("args",))
        if op == "lie-excision" and out_args["manifold"] not in ("interval", "circle"):
            raise self.error("lie-excision runs on \"interval\" or \"circle\"",
                             path + ("args", "manifold"))
        out = {"op": op, "args": out_args}
        if "range" in c or op != "validate":
            if "range" not in c:
                raise self.error("missing field 'range'", path)
            r = c["range"]
            rp = path + ("range",)
            if not (isinstance(r, list) and len(r) == 2):
                raise self.error("range must be [lo, hi]", rp)
            lo = self.integer(r[0], rp + (0,))
            hi = self.integer(r[1], rp + (1,))
            if hi < lo:
                raise self.error("range is empty", rp)
            out["range"] = [lo, hi]
        return out


def parse(text: str, field: str | None = None) -> JobSpec:
    """Parse and validate a job document, building every object once so that
    structural errors are reported with their position.  ``field`` overrides
    the field of the document."""
    p = _Parser(text)
    spec = p.parse()
    if field is not None:
        fld = Field.parse(field)
        spec.field = "q" if fld.is_rational else f"fp:{fld.p}"
    objs = Objects(spec, spec.field_obj())
    for s in SECTIONS:
        for name in spec.objects.get(s, {}):
            try:
                objs.get(s, name)
            except MalformedInputError as e:
                raise p.error(f"{s[:-1] if s != 'lie' else 'lie algebra'} {name!r}: {e}",
                              (s, name)) from None
    return spec


# ---------------------------------------------------------------------------
# building objects


class Objects:
    """Builds and caches the objects of a job over one field."""

    def __init__(self, spec: JobSpec, fld: Field):
        self.spec = spec
        self.field = fld
        self.cache: dict = {}

    def get(self, section: str, name: str):
        key = (section, name)
        if key not in self.cache:
            d = self.spec.objects[section][name]
            self.cache[key] = getattr(self, "_" + section)(d, name)
        return self.cache[key]

    def _complexes(self, d, name):
        basis: dict = {}
        deg = {}
        for b in d["basis"]:
            basis.setdefault(b["degree"], []).append(b["name"])
            deg[b["name"]] = b["degree"]
        dd: dict = {}
        for t in d["d"]:
            if deg[t["to"]] != deg[t["from"]] - 1:
                raise MalformedInputError(f"differential of {t['from']} is not of degree -1")
            dd.setdefault(t["from"], {})
            dd[t["from"]][t["to"]] = dd[t["from"]].get(t["to"], 0) + self.field(t["coeff"])
        return ChainComplex.from_function(self.field, basis, lambda x: dd.get(x, {}))

    def _basis(self, d):
        return [(b["name"], b["degree"]) for b in d["basis"]]

    def _diff(self, d):
        dd: dict = {}
        for t in d["d"]:
            v = dd.setdefault(t["from"], {})
            v[t["to"]] = v.get(t["to"], 0) + self.field(t["coeff"])
        return dd

    def _algebras(self, d, name):
        F = self.field
        b = d.get("builder")
        if b is not None:
            gens = d.get("generators", [])
            names = [g["name"] for g in gens]
            degs = [g["degree"] for g in gens]
            if b == "unit":
                a = unit_algebra(F)
            elif b == "exterior":
                a = exterior(names, degs, F)
            elif b == "truncated-polynomial":
                g = d["generator"]
                a = truncated_polynomial(g["name"], g["degree"], d["nilpotency"], F)
            elif b == "square-zero":
                a = square_zero(list(zip(names, degs)), field=F)
            else:
                a = truncated_tensor(names, degs, d["max_length"], F)
        else:
            prod: dict = {}
            for t in d["product"]:
                v = prod.setdefault((t["left"], t["right"]), {})
                for r in t["result"]:
                    v[r["name"]] = v.get(r["name"], 0) + F(r["coeff"])
            a = DGAlgebra.from_tables(F, self._basis(d), d["unit"], prod, self._diff(d), name)
        a.name = name
        return a

    def _coalgebras(self, d, name):
        F = self.field
        if d.get("builder") == "koszul-dual":
            c = koszul_dual(self.get("algebras", d["algebra"]))
        else:
            cop: dict = {}
            for t in d["coproduct"]:
                v = cop.setdefault(t["of"], {})
                for r in t["result"]:
                    k = (r["left"], r["right"])
                    v[k] = v.get(k, 0) + F(r["coeff"])
            c = DGCoalgebra.from_tables(F, self._basis(d), d["counit"], cop, self._diff(d), name)
        c.name = name
        return c

    def _modules(self, d, name):
        a = self.get("algebras", d["algebra"])
        b = d.get("builder")
        side = d.get("side", "right")
        if b == "regular":
            return regular_module(a, side)
        if b == "trivial":
            return trivial_module(a, side)
        if b == "ideal":
            return ideal_module(a, side)
        if b == "bar-bimodule":
            return bar_bimodule(a)
        if side == "bimodule":
            raise MalformedInputError("tabulated modules are one-sided; bimodules come "
                                      "from the regular builder")
        known = set(a.all_labels())
        act: dict = {}
        for t in d["action"]:
            if t["element"] not in known:
                raise MalformedInputError(f"unknown algebra element {t['element']!r}")
            key = (t["element"], t["on"]) if side == "left" else (t["on"], t["element"])
            v = act.setdefault(key, {})
            for r in t["result"]:
                v[r["name"]] = v.get(r["name"], 0) + self.field(r["coeff"])
        for m, _ in self._basis(d):
            key = (a.unit, m) if side == "left" else (m, a.unit)
            act.setdefault(key, {m: 1})
        return DGModule.from_tables(self.field, self._basis(d), a, side, act,
                                    d=self._diff(d), name=name)

    def _comodules(self, d, name):
        c = self.get("coalgebras", d["coalgebra"])
        b = d.get("builder")
        side = d.get("side", "left")
        if b == "regular":
            return regular_comodule(c, side)
        if b == "trivial":
            return trivial_comodule(c, side)
        known = set(c.all_labels())
        co: dict = {}
        for t in d["coaction"]:
            v = co.setdefault(t["of"], {})
            for r in t["result"]:
                if r["coalgebra"] not in known:
                    raise MalformedInputError(f"unknown coalgebra element {r['coalgebra']!r}")
                k = (r["coalgebra"], r["comodule"]) if side == "left" else \
                    (r["comodule"], r["coalgebra"])
                v[k] = v.get(k, 0) + self.field(r["coeff"])
        return DGComodule.from_tables(self.field, self._basis(d), c, side, co,
                                      d=self._diff(d), name=name)

    def _lie(self, d, name):
        if not self.field.is_rational:
            raise MalformedInputError("Lie algebras need the rational field")
        b = d.get("builder")
        if b == "abelian":
            g = abelian(d["dim"], d.get("degree", 0))
        elif b == "heisenberg":
            g = heisenberg()
        else:
            br: dict = {}
            for t in d["bracket"]:
                v = br.setdefault((t["left"], t["right"]), {})
                for r in t["result"]:
                    v[r["name"]] = v.get(r["name"], 0) + self.field(r["coeff"])
            g = DGLie(self._basis(d), br, self._diff(d), self.field, name)
        g.name = name
        return g

    def _gluings(self, d, name):
        a = self.get("algebras", d["coefficients"])
        if "positions" in d:
            return GluingDiagram(_manifold(d["manifold"]), tuple(Fraction(p) for p in d["positions"]), a)
        cuts = d.get("cuts", 1 if d["manifold"] == "circle" else 0)
        return GluingDiagram.evenly(_manifold(d["manifold"]), cuts, a)


def _manifold(m):
    if isinstance(m, list):
        return [c if c == "interval" else tuple(c) for c in m]
    return m


# ---------------------------------------------------------------------------
# running


class CheckFailed(Exception):
    def __init__(self, what: str, witnesses: list):
        super().__init__(what)
        self.what = what
        self.witnesses = witnesses


@dataclass
class Options:
    max_word_length: int | None = None
    window: int = 2
    allow_uncertified: bool = False
    timing: bool = False


def jsonable(x):
    """Deterministic JSON form of report values."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, ModP):
        return int(x)
    if isinstance(x, dict):
        return {(k if isinstance(k, str) else label_name(k) if not isinstance(k, int)
                 else str(k)): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(jsonable(v) for v in x)
    return type(x).__name__


class Runner:
    def __init__(self, spec: JobSpec, fld: Field, opts: Options):
        self.spec = spec
        self.objects = Objects(spec, fld)
        self.field = fld
        self.opts = opts

    def policy(self) -> Policy:
        if self.opts.max_word_length is None:
            return Policy()
        return Policy.truncate(self.opts.max_word_length, self.opts.window)

    def algebra(self, name):
        a = self.objects.get("algebras", name)
        rep = validate_algebra(a)
        if not rep.ok:
            raise CheckFailed(f"algebra {name!r} fails its axioms", rep.failures)
        return a

    def coalgebra(self, name):
        c = self.objects.get("coalgebras", name)
        if c.finite:
            rep = validate_coalgebra(c)
            if not rep.ok:
                raise CheckFailed(f"coalgebra {name!r} fails its axioms", rep.failures)
        return c

    def run(self) -> dict:
        results = []
        for i, cmd in enumerate(self.spec.commands):
            results.append(self.run_one(i, cmd))
        fld = "q" if self.field.is_rational else f"fp:{self.field.p}"
        return {"version": __version__, "field": fld, "commands": results}

    def run_one(self, i: int, cmd: dict) -> dict:
        op = cmd["op"]
        rng = cmd.get("range")
        out = {"index": i, "op": op, "args": cmd["args"], "range": rng}
        t0 = time.perf_counter()
        try:
            status, betti, details = getattr(self, "op_" + op.replace("-", "_"))(
                cmd["args"], *(rng or (None, None)))
            out["status"] = status
            if betti is not None:
                out["betti"] = betti
            out["details"] = details
        except CheckFailed as e:
            out["status"] = "fail"
            out["details"] = {"reason": e.what}
            out["witnesses"] = e.witnesses[:5]
        except PositivityError as e:
            out["status"] = "error"
            out["details"] = {"reason": str(e), "degrees": list(e.degrees)}
        except MalformedInputError as e:
            out["status"] = "error"
            out["details"] = {"reason": str(e)}
        if self.opts.timing:
            out["seconds"] = round(time.perf_counter() - t0, 3)
        return jsonable(out)

    # -- helpers ------------------------------------------------------------

    def _betti_stable(self, betti_of, lo, hi, offending: list):
        """``betti_of(cap)`` with no word cap when no degree is ``offending``
        for positivity, else stabilised over the word caps of the policy."""
        if not offending:
            return "pass", betti_of(None), {"certificate": "exact"}
        p = self.policy()
        if p.mode == "exact":
            raise PositivityError(f"input is not positive (offending degrees {offending}); "
                                  "pass --max-word-length", offending)
        hist = [(n, betti_of(n)) for n in range(p.maxp, p.maxp + p.window + 1)]
        stable = all(h == hist[0][1] for _, h in hist)
        status = "pass" if stable else "truncated-uncertified"
        return status, hist[-1][1], {"certificate": "stabilized" if stable else "none",
                                     "history": hist}

    @staticmethod
    def _verdict(v, betti_key=None):
        det = dict(v.details)
        betti = det.get(betti_key) if betti_key else None
        return ("pass" if v.ok else "fail"), betti, det

    # -- ops ----------------------------------------------------------------

    def op_homology(self, args, lo, hi):
        if "complex" in args:
            c = self.objects.get("complexes", args["complex"])
            rep = validate(c)
            if not rep.ok:
                raise CheckFailed("d^2 is not zero", rep.failures)
            return "pass", betti_table(c, lo, hi), {}
        if "algebra" in args:
            return "pass", graded_betti(self.algebra(args["algebra"]), lo, hi), {}
        return "pass", graded_betti(self.coalgebra(args["coalgebra"]), lo, hi), {}

    def op_validate(self, args, lo, hi):
        (kind, name), = args.items()
        sec = OP_ARGS["validate"][kind]
        obj = self.objects.get(sec, name)
        rep = {"complexes": validate, "algebras": validate_algebra,
               "coalgebras": validate_coalgebra, "modules": validate_module,
               "comodules": validate_comodule, "lie": validate_lie}[sec](obj)
        if not rep.ok:
            raise CheckFailed(f"{rep.checked} fail", rep.failures)
        return "pass", None, {"checked": rep.checked}

    def _module(self, args, key, a, side):
        if key not in args:
            return trivial_module(a, side)
        m = self.objects.get("modules", args[key])
        over = self.spec.objects["modules"][args[key]]["algebra"]
        if self.objects.get("algebras", over) is not a:
            raise MalformedInputError(f"module {args[key]!r} is over algebra {over!r}")
        rep = validate_module(m)
        if not rep.ok:
            raise CheckFailed(f"module {args[key]!r} fails its axioms", rep.failures)
        return m

    def op_bar(self, args, lo, hi):
        a = self.algebra(args["algebra"])
        k = self._module(args, "left", a, "right")
        l = self._module(args, "right", a, "left")
        return self._betti_stable(
            lambda n: graded_betti(BarComplex([k, l], a, max_word_length=n), lo, hi),
            lo, hi, positivity_failures(a))

    def op_koszul_dual(self, args, lo, hi):
        a = self.algebra(args["algebra"])
        return self._betti_stable(lambda n: graded_betti(koszul_dual(a, n), lo, hi),
                                  lo, hi, positivity_failures(a))

    def op_cobar(self, args, lo, hi):
        c = self.coalgebra(args["coalgebra"])
        return self._betti_stable(lambda n: graded_betti(cobar(c, n), lo, hi),
                                  lo, hi, [] if is_copositive(c, 2) else [c.coideal_lo])

    def op_cotensor(self, args, lo, hi):
        c = self.coalgebra(args["coalgebra"])
        k = self.objects.get("comodules", args["left"]) if "left" in args else \
            trivial_comodule(c, "right")
        l = self.objects.get("comodules", args["right"]) if "right" in args else \
            trivial_comodule(c, "left")
        for m in (k, l):
            rep = validate_comodule(m)
            if not rep.ok:
                raise CheckFailed("comodule fails its axioms", rep.failures)
        r = cotensor(k, c, l, lo, hi, self.policy())
        status = "pass" if r.certified else "truncated-uncertified"
        return status, r.betti, {"certificate": r.status, "history": r.history}

    def op_roundtrip(self, args, lo, hi):
        v = roundtrip_check(self.algebra(args["algebra"]), lo, hi)
        return self._verdict(v, "source_betti")

    def op_completeness(self, args, lo, hi):
        a = self.algebra(args["algebra"])
        k = self._module(args, "module", a, "right") if "module" in args else \
            regular_module(a, "right")
        _, v = completeness_map(k, a, lo, hi)
        return self._verdict(v, "source_betti")

    def op_interchange(self, args, lo, hi):
        a = self.algebra(args["algebra"])
        k = self._module(args, "left", a, "right")
        l = bar_bimodule(a)
        v = interchange_check(k, a, l, l.dual, trivial_comodule(l.dual, "left"), lo, hi)
        return self._verdict(v, "source_betti")

    def _gluing(self, name):
        g = self.objects.get("gluings", name)
        self.algebra(self.spec.objects["gluings"][name]["coefficients"])
        return g

    def op_excision(self, args, lo, hi):
        g = self._gluing(args["gluing"])
        if "alternative" in args:
            alt = self._gluing(args["alternative"])
        else:
            alt = GluingDiagram.evenly(g.manifold, 1 if g.manifold == "circle" else 0,
                                       g.coefficients)
        v = excision_check(g, alt, lo, hi, self.opts.max_word_length)
        return self._verdict(v, "betti")

    def op_coexcision(self, args, lo, hi):
        c = self.coalgebra(args["coalgebra"])
        g = self._gluing(args["gluing"])
        alt = self._gluing(args["alternative"]) if "alternative" in args else None
        v = coexcision_check(c, g, lo, hi, alt, self.policy())
        status = "fail" if not v.ok else \
            ("pass" if v.details["status"] != "truncated-uncertified" else "truncated-uncertified")
        return status, v.details["betti"], dict(v.details)

    def op_poincare(self, args, lo, hi):
        v = poincare_check(self.algebra(args["algebra"]), None, lo, hi)
        return self._verdict(v, "glued_betti")

    def op_circle(self, args, lo, hi):
        a = self.algebra(args["algebra"])
        return self._betti_stable(lambda n: circle_homology(a, lo, hi, n), lo, hi, positivity_failures(a))

    def op_compact_support(self, args, lo, hi):
        a = self.algebra(args["algebra"])
        r = compact_support(a, _manifold(args["manifold"]), lo, hi)
        return "pass", r.betti, {"components": r.manifold, "provenance": r.provenance}

    def _lie(self, name):
        g = self.objects.get("lie", name)
        rep = validate_lie(g)
        if not rep.ok:
            raise CheckFailed(f"Lie algebra {name!r} fails its axioms", rep.failures)
        return g

    def op_ce(self, args, lo, hi):
        h = ce_homology(self._lie(args["lie"]), args["weight_cap"], lo, hi)
        return ("pass" if h.certified else "truncated-uncertified"), h.betti, \
            {"certificate": "weight cap" if h.certified else "none", "weight_cap": h.R}

    def op_ce_monoidality(self, args, lo, hi):
        v = monoidality_check(self._lie(args["left"]), self._lie(args["right"]),
                              args["weight_cap"], lo, hi)
        return self._verdict(v)

    def op_lie_excision(self, args, lo, hi):
        v = lie_excision_check(self._lie(args["lie"]), args["manifold"], args["weight_cap"], lo, hi)
        return self._verdict(v)


# ---------------------------------------------------------------------------
# output


def table(report: dict) -> str:
    lines = []
    for c in report["commands"]:
        args = " ".join(f"{k}={_short(v)}" for k, v in c["args"].items())
        rng = f"{c['range'][0]}..{c['range'][1]}" if c.get("range") else ""
        lines.append(" ".join(x for x in (f"[{c['index']}]", c["op"], args, rng, c["status"]) if x))
        b = c.get("betti")
        if b:
            degs = list(b)
            w = max(len(str(x)) for x in degs + list(b.values()))
            lines.append("    degree " + " ".join(str(d).rjust(w) for d in degs))
            lines.append("    betti  " + " ".join(str(b[d]).rjust(w) for d in degs))
        if c["status"] in ("fail", "error"):
            reason = c.get("details", {}).get("reason")
            if reason:
                lines.append(f"    {reason}")
            for wit in c.get("witnesses", [])[:3]:
                lines.append(f"    witness {json.dumps(wit, sort_keys=True)}")
    return "\n".join(lines) + ("\n" if lines else "")


def _short(v):
    return v if isinstance(v, (str, int)) else json.dumps(v)


def exit_code(report: dict, allow_uncertified: bool = False) -> int:
    statuses = [c["status"] for c in report["commands"]]
    if "error" in statuses:
        return 2
    if "fail" in statuses:
        return 1
    if "truncated-uncertified" in statuses and not allow_uncertified:
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="koszulfh", description="Run a koszulfh job file.")
    p.add_argument("--job", required=True, help="JSON job document")
    p.add_argument("--field", help="q or fp:P; overrides the document")
    p.add_argument("--max-word-length", type=int, help="word cap for non-positive inputs")
    p.add_argument("--stabilization-window", type=int, default=2,
                   help="extra word caps that must agree (default 2)")
    p.add_argument("--emit", choices=("json", "table", "both"), default="both")
    p.add_argument("--threads", type=int, default=1,
                   help="accepted for compatibility; commands run sequentially")
    p.add_argument("--allow-uncertified", action="store_true",
                   help="exit 0 even when a result lacks a certificate")
    p.add_argument("--timing", action="store_true", help="add wall-clock seconds to the report")
    p.add_argument("--report", help="also write the JSON report to this file")
    return p


def run(spec: JobSpec, fld: Field | None = None, opts: Options | None = None) -> dict:
    fld = fld or spec.field_obj()
    return Runner(spec, fld, opts or Options()).run()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.threads < 1:
            raise JobError("--threads must be at least 1")
        if args.max_word_length is not None and args.max_word_length < 0:
            raise JobError("--max-word-length must be nonnegative")
        if args.stabilization_window < 2:
            raise JobError("--stabilization-window must be at least 2")
        try:
            with open(args.job, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise JobError(f"cannot read job file: {e.strerror}") from None
        spec = parse(text, args.field)
        fld = spec.field_obj()
    except MalformedInputError as e:
        print(f"koszulfh: {e}", file=sys.stderr)
        return 2
    opts = Options(args.max_word_length, args.stabilization_window, args.allow_uncertified,
                   args.timing)
    report = run(spec, fld, opts)
    text = json.dumps(report, indent=2) + "\n"
    if args.emit in ("table", "both"):
        sys.stdout.write(table(report))
    if args.emit in ("json", "both"):
        sys.stdout.write(text)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    return exit_code(report, args.allow_uncertified)


if __name__ == "__main__":
    sys.exit(main())
