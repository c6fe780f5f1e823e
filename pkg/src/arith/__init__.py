"""
Exact and precision-tracked arithmetic: Q_p digits, polynomials over F_p,
the extension K = Q_p(γ, β), the cyclotomic fields Q(i) / Q(ω), and the
element-literal grammar used by the command line.
"""
