"""
Sign and ordering conventions shared by the jet and group-cocycle code.

GK_SIGN
    The Gelfand-Kazhdan form is omega(tau) = GK_SIGN * jet of d/dt (k_0^{-1} o k_t) at t = 0.
GROUP LAW
    Diffeomorphisms act on the right: the product g1 g2 means "g1 first",
    i.e. g2 o g1.  ``group_mul`` is the only place this order is spelled out.
BOTT ARGUMENTS
    The composite arguments are gbar_i = g_i o ... o g_1, which under the
    right-action law is the group product g_1 g_2 ... g_i.
FLAT CIRCLE
    With the flat metric the connection form vanishes, so xi(g) = d log g'
    and the volume factor is mu(g) = g' for a lift g of a circle map.
"""

GK_SIGN = -1


def group_mul(g1, g2, compose):
    """g1 g2 = g2 o g1, given ``compose(outer, inner)``."""
    return compose(g2, g1)


def running_products(gs, compose):
    """[g_1, g_1 g_2, g_1 g_2 g_3, ...] == [g_1, g_2 o g_1, g_3 o g_2 o g_1, ...]."""
    out = []
    acc = None
    for g in gs:
        acc = g if acc is None else group_mul(acc, g, compose)
        out.append(acc)
    return out
