"""Compare the unfolded integral I_p(s) computed directly with its zeta closed form."""
from theta_lab.eisenstein import ClosedFormParams, ip_closed, ip_direct

for p in (3, 5):
    for s in (1.5, 2.0, 3.0):
        prm = ClosedFormParams(s=s, p=p)
        closed, direct = ip_closed(prm).real, ip_direct(prm)
        print(f"p={p} s={s}: closed {closed:.12f}  direct {direct:.12f}  rel {abs(direct / closed - 1):.1e}")
