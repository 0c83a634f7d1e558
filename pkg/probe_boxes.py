import time
from lmotqft.diagrams import Skeleton, arrows, chain, circles, representative
from lmotqft.enumeration import diagrams_on
from lmotqft.spaces import DiagramSpace
from lmotqft import boxes as B

t0 = time.time()


def tick(msg):
    print("%7.2fs  %s" % (time.time() - t0, msg), flush=True)


def two_pending_bases(skel2, degree):
    out = []
    for k in diagrams_on(skel2, degree):
        r = representative(k)
        c0 = [l for l, c in r.colored if c == 0]
        c1 = [l for l, c in r.colored if c == 1]
        if len(c0) == 1 and len(c1) == 1:
            out.append(r)
    return out


def one_pending_bases(skel1, degree):
    out = []
    for k in diagrams_on(skel1, degree):
        r = representative(k)
        if len(r.colored) == 1:
            out.append(r)
    return out


# --- box-STU on one interval, mixed bundles -------------------------------
sk2 = Skeleton(arrows(1).components, 2)
sp1 = DiagramSpace(arrows(1))
bad = 0
n = 0
for d in (1, 2, 3):
    bases = two_pending_bases(sk2, d)
    tick("arrows(1) deg %d: %d two-pending bases" % (d, len(bases)))
    for r in bases:
        bundle = [("bold", 0, 0, 1)]
        bundle += [("dashed", p) for p in B.eligible_pairs(r, (0, 1))[:3]]
        s = B.box_stu_sum(r, 0, 1, bundle)
        n += 1
        if not sp1.nf(s).is_zero():
            bad += 1
            print("  STU FAIL:", r)
tick("box-STU arrows(1): %d instances, %d bad" % (n, bad))

# --- box-AS on one interval ------------------------------------------------
bad = 0
n = 0
for d in (1, 2):
    for r in one_pending_bases(sk2, d):
        if r.colored[0][1] != 0:
            continue
        bundle = [("bold", 0, 0, 1)]
        bundle += [("dashed", p) for p in B.eligible_pairs(r, (0,))[:3]]
        s = B.box_as_sum(r, 0, 1, bundle)
        n += 1
        if not sp1.nf(s).is_zero():
            bad += 1
            print("  AS FAIL:", r)
tick("box-AS arrows(1): %d instances, %d bad" % (n, bad))

# --- route difference on genus-2 chains -----------------------------------
spA2 = DiagramSpace(arrows(2))
ch2 = Skeleton([chain(2)])
conn = ch2.edge_named(0, ("conn", 1))
bad = 0
n = 0
for d in (1, 2):
    for k in diagrams_on(ch2, d):
        r = representative(k)
        if not r.edge_legs[conn]:
            continue
        s = B.conn_route_difference(r)
        n += 1
        if not spA2.nf(s).is_zero():
            bad += 1
            print("  R9 FAIL:", r)
tick("route diff chain(2): %d instances, %d bad" % (n, bad))

# --- seam rotations on circles --------------------------------------------
bad = 0
n = 0
for d in (1, 2, 3):
    for k in diagrams_on(circles(1), d):
        cuts = B.seam_cuts(representative(k))
        base = sp1.nf(cuts[0])
        for c in cuts[1:]:
            n += 1
            if not sp1.equal(c, base):
                bad += 1
                print("  SEAM FAIL:", k)
tick("seam cuts circles(1): %d comparisons, %d bad" % (n, bad))
