#!/usr/bin/env python3
"""Standalone checker for uncompressed Metamath databases.

Usage: mmcheck.py DATABASE [THEOREM PROOF_FILE]

With one argument every $p proof in the database is checked. With three, the
labels in PROOF_FILE are checked as a proof of THEOREM. Exits non-zero on the
first failure.
"""
import sys


class MMError(Exception):
    pass


def tokens(text):
    toks = text.split()
    out = []
    i = 0
    while i < len(toks):
        if toks[i] == "$(":
            while i < len(toks) and toks[i] != "$)":
                i += 1
            if i == len(toks):
                raise MMError("unterminated comment")
        else:
            out.append(toks[i])
        i += 1
    return out


class Frame:
    def __init__(self):
        self.c = set()
        self.v = set()
        self.d = set()
        self.f = []  # (var, typecode, label)
        self.e = []  # (stmt, label)


class Database:
    def __init__(self):
        self.frames = [Frame()]
        self.labels = {}  # label -> (kind, payload)
        self.order = []

    def active_vars(self):
        return set().union(*(fr.v for fr in self.frames))

    def lookup_f(self, var):
        for fr in reversed(self.frames):
            for v, t, lab in fr.f:
                if v == var:
                    return lab
        return None

    def make_assertion(self, stmt):
        estmts = [s for fr in self.frames for s, _ in fr.e]
        mand = set(t for s in estmts + [stmt] for t in s if t in self.active_vars())
        dvs = set()
        for fr in self.frames:
            for x, y in fr.d:
                if x in mand and y in mand:
                    dvs.add((x, y))
        hyps = []
        positions = []
        for fr in self.frames:
            for v, t, lab in fr.f:
                if v in mand:
                    positions.append((self.pos[lab], lab))
            for s, lab in fr.e:
                positions.append((self.pos[lab], lab))
        positions.sort()
        hyps = [lab for _, lab in positions]
        return (dvs, hyps, stmt)

    def read(self, toks):
        self.pos = {}
        i = 0
        n = 0
        def until(end):
            nonlocal i
            out = []
            while toks[i] != end:
                out.append(toks[i])
                i += 1
            i += 1
            return out
        while i < len(toks):
            t = toks[i]
            i += 1
            if t == "$c":
                self.frames[-1].c.update(until("$."))
            elif t == "$v":
                self.frames[-1].v.update(until("$."))
            elif t == "$d":
                vs = until("$.")
                for a in vs:
                    for b in vs:
                        if a < b:
                            self.frames[-1].d.add((a, b))
            elif t == "${":
                self.frames.append(Frame())
            elif t == "$}":
                self.frames.pop()
            else:
                label = t
                kw = toks[i]
                i += 1
                if label in self.labels:
                    raise MMError("duplicate label " + label)
                n += 1
                self.pos[label] = n
                if kw == "$f":
                    typ, var = until("$.")
                    self.frames[-1].f.append((var, typ, label))
                    self.labels[label] = ("f", [typ, var])
                elif kw == "$e":
                    stmt = until("$.")
                    self.frames[-1].e.append((stmt, label))
                    self.labels[label] = ("e", stmt)
                elif kw == "$a":
                    self.labels[label] = ("a", self.make_assertion(until("$.")))
                    self.order.append(label)
                elif kw == "$p":
                    stmt = until("$=")
                    proof = until("$.")
                    self.labels[label] = ("p", self.make_assertion(stmt), proof)
                    self.order.append(label)
                    self.check(label, proof)
                else:
                    raise MMError("unexpected token " + kw)

    def active_hyps(self):
        out = {}
        for fr in self.frames:
            for v, t, lab in fr.f:
                out[lab] = [t, v]
            for s, lab in fr.e:
                out[lab] = s
        return out

    def active_dv(self):
        return set().union(*(fr.d for fr in self.frames))

    def check(self, label, proof):
        """Checks `proof` against the $p `label` in the current scope."""
        stmt = self.labels[label][1][2]
        hyps = self.active_hyps()
        dv = self.active_dv()
        variables = self.active_vars()
        stack = []
        for step in proof:
            if step in hyps:
                stack.append(list(hyps[step]))
                continue
            if step not in self.labels or self.labels[step][0] not in ("a", "p") or step == label:
                raise MMError("%s: bad label %s" % (label, step))
            dvs, mand, concl = self.labels[step][1]
            if len(stack) < len(mand):
                raise MMError("%s: stack underflow at %s" % (label, step))
            base = len(stack) - len(mand)
            sub = {}
            for k, h in enumerate(mand):
                kind, body = self.labels[h][0], self.labels[h][1]
                entry = stack[base + k]
                if kind == "f":
                    if entry[0] != body[0]:
                        raise MMError("%s: typecode mismatch at %s" % (label, step))
                    sub[body[1]] = entry[1:]
            for k, h in enumerate(mand):
                kind, body = self.labels[h][0], self.labels[h][1]
                if kind == "e":
                    inst = [x for t in body for x in sub.get(t, [t])]
                    if inst != stack[base + k]:
                        raise MMError("%s: hypothesis mismatch at %s" % (label, step))
            for x, y in dvs:
                for a in sub[x]:
                    if a not in variables:
                        continue
                    for b in sub[y]:
                        if b not in variables:
                            continue
                        if a == b or (min(a, b), max(a, b)) not in dv:
                            raise MMError("%s: disjoint violation at %s" % (label, step))
            del stack[base:]
            stack.append([x for t in concl for x in sub.get(t, [t])])
        if len(stack) != 1 or stack[0] != stmt:
            raise MMError("%s: wrong final statement" % label)


def main(argv):
    if len(argv) not in (2, 4):
        print(__doc__, file=sys.stderr)
        return 2
    with open(argv[1]) as f:
        toks = tokens(f.read())
    db = Database()
    try:
        if len(argv) == 2:
            db.read(toks)
            print("ok: %d assertions" % len(db.order))
            return 0
        theorem = argv[2]
        with open(argv[3]) as f:
            proof = [t for t in f.read().split() if t not in ("$=", "$.")]
        # Replace the stored proof of `theorem` so it is checked in its own scope.
        cut = toks.index(theorem)
        if toks[cut + 1] != "$p":
            raise MMError("%s is not a $p statement" % theorem)
        eq = toks.index("$=", cut)
        end = toks.index("$.", eq)
        toks = toks[:eq + 1] + proof + toks[end:]
        db.read(toks)
        print("ok: %s" % theorem)
        return 0
    except (MMError, KeyError, ValueError, IndexError) as err:
        print("error: %s" % err, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main(sys.argv))
