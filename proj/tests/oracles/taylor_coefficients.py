"""Independent oracle for the origin power series of the radial profile.

Substitutes f(r) = sum a_k r^k with symbolic a_k into the profile equation
multiplied through by w = r f_r - f, and solves order by order with exact
rational arithmetic. Output values are frozen into the C++ tests.
"""
import sys
import sympy as sp

def coefficients(n, lam, mu, order):
    r = sp.symbols('r')
    a = sp.symbols(f'a0:{order + 1}')
    f = sum(a[k] * r**k for k in range(order + 1))
    fr = sp.diff(f, r)
    frr = sp.diff(fr, r)
    w = r * fr - f
    # r * w * (ODE) is polynomial in r
    expr = sp.expand(r * w * frr + (n - 1) * w * (1 + fr**2) * fr - r * (1 + fr**2)**2 / lam)
    sol = {a[0]: mu, a[1]: 0}
    for m in range(0, order - 1):
        c = sp.expand(expr.coeff(r, m + 1).subs(sol))
        s = sp.solve(c, a[m + 2])
        assert len(s) == 1, (m, s)
        sol[a[m + 2]] = sp.nsimplify(s[0])
    return [sol[a[k]] for k in range(order + 1)]

if __name__ == '__main__':
    n, lam, mu = 2, sp.Integer(1), sp.Integer(-1)
    cs = coefficients(n, lam, mu, 10)
    print('(2,1,-1):', cs)
    x = sp.Rational(1, 20)
    f = sum(c * x**k for k, c in enumerate(cs))
    fr = sum(k * c * x**(k - 1) for k, c in enumerate(cs) if k)
    print('f(0.05)  =', sp.N(f, 25))
    print('fr(0.05) =', sp.N(fr, 25))
    for params in [(3, sp.Integer(2), sp.Rational(-1, 2)), (4, sp.Rational(3, 2), sp.Integer(-4))]:
        print(params, coefficients(*params, 8))
    # generic symbolic a3, a4
    nn, ll, mm = sp.symbols('n lambda mu')
