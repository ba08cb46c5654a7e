"""Direct evaluation of the additive Holt-Winters equations, written
independently of tesolar.tes: seasonal terms live in a dict keyed by absolute
time (initial indices at t = -L .. -1), equations in their textbook form.
Works with floats or Fractions.
"""


def initial_values(k, L, n_init, mode="additive"):
    N = n_init // L
    s0 = k[0]
    b0 = sum((k[L + i - 1] - k[i - 1]) / L for i in range(1, L + 1)) / L
    A = {j: sum(k[L * (j - 1) + i - 1] for i in range(1, L + 1)) / L for j in range(1, N + 1)}
    if mode == "additive":
        c = [sum(k[L * (j - 1) + i - 1] - A[j] for j in range(1, N + 1)) / N for i in range(1, L + 1)]
    else:
        c = [sum(k[L * (j - 1) + i - 1] / A[j] for j in range(1, N + 1)) / N for i in range(1, L + 1)]
    return s0, b0, c


def run(k, valid, L, n_init, alpha, beta, gamma, mode="additive", init=None):
    """Return lists s[t], b[t] and the seasonal dict for t = 0 .. len(k)-1."""
    s0, b0, c0 = init if init is not None else initial_values(k, L, n_init, mode)
    C = {t - L: c0[t] for t in range(L)}
    C[0] = C[-L]
    s, b = [s0], [b0]
    for t in range(1, len(k)):
        if valid[t]:
            st = alpha * (k[t] - C[t - L]) + (1 - alpha) * (s[t - 1] + b[t - 1])
            bt = beta * (st - s[t - 1]) + (1 - beta) * b[t - 1]
            C[t] = gamma * (k[t] - s[t - 1] - b[t - 1]) + (1 - gamma) * C[t - L]
        else:
            st = s[t - 1] + b[t - 1]
            bt = b[t - 1]
            C[t] = C[t - L]
        s.append(st)
        b.append(bt)
    return s, b, C


def forecast(s, b, C, t, m, L):
    return s[t] + m * b[t] + C[t - L + 1 + (m - 1) % L]
