"""Standalone oracle derivations, independent of the package.

Every number printed here is recomputed from first principles with inline
formulas (no imports from nvhyperfine). Selected values are frozen as
literals in the test suite; re-run this script to audit them.
"""
import numpy as np

TWO_PI = 2.0 * np.pi

# constants (frequency-per-tesla convention, MHz/T)
MU_B = 13.996e3   # Bohr magneton / h
MU_N = 7.6226     # nuclear magneton / h

# reference parameters
A = 3.03          # MHz (hyperfine, Hamiltonian-building default)
A_TRUE = 3.06     # MHz (hidden truth in the estimation runs)
A_PERP = 3.65     # MHz
D = 2.87e3        # MHz
B = 0.2           # T
G_E = 2.0023
G_N = -0.5664
N_SHOTS = 1000
ZETA = 1.0 / np.sqrt(N_SHOTS)
C_DISP = 0.2
T2 = 350.0        # us
TAU_CAP = T2 / 2.0


def section(name):
    print("\n== " + name + " ==")


section("derived scalars")
ge_mub_B = G_E * MU_B * B
d_prime = D - ge_mub_B
gn_mun_B = G_N * MU_N * B
den = d_prime + gn_mun_B - A / 2.0
eta = A_PERP / den
delta = eta * A_PERP / 2.0
omega_res = A - gn_mun_B - delta
print(f"mu_B/mu_N ratio     = {MU_B / MU_N:.6f}  (proton/electron 1836.15)")
print(f"g_e*mu_B*B          = {ge_mub_B:.10f} MHz")
print(f"D'                  = {d_prime:.10f} MHz")
print(f"g_N*mu_N*B          = {gn_mun_B:.10f} MHz")
print(f"den=D'+gNmuNB-A/2   = {den:.10f} MHz")
print(f"eta                 = {eta:.12e}")
print(f"delta               = {delta:.12e} MHz")
print(f"5*eta^2             = {5 * eta**2:.6e}")
print(f"omega_res (freq)    = {omega_res:.10f} MHz")
print(f"omega_res (angular) = {TWO_PI * omega_res:.10f} rad/us")

section("H0 diagonal (angular rad/us), basis 0u,0d,1u,1d")
g = gn_mun_B
diag = np.array([g / 2, -g / 2, g / 2 + d_prime - A / 2, -g / 2 + d_prime + A / 2])
for lbl, v in zip(("0u", "0d", "1u", "1d"), diag):
    print(f"  E({lbl}) = {TWO_PI * v:+.10e} rad/us  ({v:+.10f} MHz)")
print(f"  E(1u)-E(1d) = {TWO_PI * (diag[2] - diag[3]):+.10e} rad/us "
      f"= 2pi*(-A + gNmuNB) = {TWO_PI * (-A + gn_mun_B):+.10e}")

section("exact 2x2 coupled-pair diagonalization vs +/-delta")
v = A_PERP / np.sqrt(2.0)
E0d, E1u = diag[1], diag[2]
mean_E = (E0d + E1u) / 2.0
half = (E1u - E0d) / 2.0
lam_hi = mean_E + np.hypot(half, v)
lam_lo = mean_E - np.hypot(half, v)
# |1,u> sits far below |0,d> (den<0): its exact level is the lower root
shift_1u = lam_lo - E1u if half < 0 else lam_hi - E1u
shift_0d = (lam_hi if half < 0 else lam_lo) - E0d
print(f"  exact shift(1u) = {shift_1u:.12e} MHz   delta = {delta:.12e}")
print(f"  exact shift(0d) = {shift_0d:.12e} MHz  -delta = {-delta:.12e}")
print(f"  rel err vs delta: {abs(shift_1u - delta) / abs(delta):.3e} (bound |eta|={abs(eta):.3e})")
ev = np.linalg.eigh(np.array([[E0d, v], [v, E1u]]))[1]
overlap = max(abs(ev[0, 0]), abs(ev[0, 1]))
print(f"  eigenvector overlap with unperturbed = {overlap:.12f} (1-O(eta^2))")

section("no-echo expectation formula, frozen samples")
def x_no_echo(tau, q_z):
    ph = TWO_PI * (d_prime + delta) * tau
    return np.cos(ph) * np.cos(TWO_PI * A / 2 * tau) + q_z * np.sin(ph) * np.sin(TWO_PI * A / 2 * tau)
for tau, qz in ((0.7, 0.0), (0.7, 0.9), (2.31, -0.5), (5.17, 1.0)):
    print(f"  tau={tau}, q_z={qz}: X = {x_no_echo(tau, qz):+.12f}")

section("scheduler first step, prior (3.03, 0.03), c=0.2")
A0, D0 = 3.03, 0.03
tau_star = C_DISP / (TWO_PI * D0)
for m in range(6):
    t = (m + 0.25) / A0
    print(f"  m={m}: tau={t:.6f} us, 2pi*Delta*tau={TWO_PI * D0 * t:.6f}")
m1 = int(round(A0 * tau_star - 0.25))
tau1 = (m1 + 0.25) / A0
print(f"  tau* = {tau_star:.6f} -> snap m1={m1}, tau1={tau1:.10f}, disp={TWO_PI * D0 * tau1:.6f}")
dbar1 = ZETA / (TWO_PI * tau1)
d1 = 1.0 / np.sqrt(1.0 / D0**2 + 1.0 / dbar1**2)
print(f"  Delta_bar_1 = {dbar1:.10e} MHz, posterior Delta_1 = {d1:.10e} MHz")
print(f"  zeta/c = {ZETA / C_DISP:.6f}; config ratios c/zeta={C_DISP / ZETA:.3f}, 6zeta/c^3={6 * ZETA / C_DISP**3:.3f}")

def schedule(Q_of_tau, tau_cap, K, label):
    """Delta recursion; A_{k-1} frozen at truth after step 1 (estimator converges)."""
    section(label)
    mean, Dk = A0, D0
    info = 1.0 / D0**2
    sum_tau, taus = 0.0, []
    for k in range(1, K + 1):
        t_star = C_DISP / (TWO_PI * Dk)
        m = int(round(mean * min(t_star, tau_cap) - 0.25))
        if t_star > tau_cap:
            m = int(np.floor(mean * tau_cap - 0.25))
        tk = (m + 0.25) / mean
        Q = Q_of_tau(tk)
        dbar = ZETA / (TWO_PI * Q * tk)
        info += 1.0 / dbar**2
        Dk_new = 1.0 / np.sqrt(info)
        sum_tau += tk
        taus.append(tk)
        d_qml = 1.0 / np.sqrt(N_SHOTS) / (TWO_PI * sum_tau)
        d_sql = 1.0 / np.sqrt(N_SHOTS * (TWO_PI * taus[0]) * (TWO_PI * sum_tau))
        print(f"  k={k}: m={m:5d} tau={tk:12.6f} Q={Q:.6f} Dbar={dbar:.4e} "
              f"Delta={Dk_new:.4e} ratio_prev={Dk_new / Dk:.4f} "
              f"D/D_QML={Dk_new / d_qml:.4f} D/D_SQL={Dk_new / d_sql:.4f} "
              f"info_add={1.0 / dbar**2:.6e}")
        Dk = Dk_new
        mean = A_TRUE
    return taus

schedule(lambda t: 1.0, np.inf, 6, "ideal schedule (Q=1), A->truth after k=1")
taus_d = schedule(lambda t: np.exp(-2.0 * t / T2), TAU_CAP, 9,
                  f"decoherence schedule T2={T2}, cap={TAU_CAP}")
tau_capped = taus_d[-1]
slope = N_SHOTS * (TWO_PI * np.exp(-2.0 * tau_capped / T2) * tau_capped) ** 2
print(f"  post-cap per-step info add = {slope:.8e} MHz^-2")
print(f"  N*(2pi*e^-1*T2/2)^2        = {N_SHOTS * (TWO_PI * np.exp(-1) * TAU_CAP)**2:.8e}")
print(f"  literal N*(2pi*T2/2)^2     = {N_SHOTS * (TWO_PI * TAU_CAP)**2:.8e} (off by e^2)")

section("grid posterior vs Gaussian pipeline, pinned case")
# prior (3.03, 0.03); tau = tau1; Q = 1; N = 1000; observed n_plus = 450
n_plus = 450
Z = (2 * n_plus - N_SHOTS) / N_SHOTS
grid = np.linspace(A0 - 6 * D0, A0 + 6 * D0, 100_000)
p_plus = (1.0 + np.cos(TWO_PI * grid * tau1)) / 2.0
loglik = n_plus * np.log(p_plus) + (N_SHOTS - n_plus) * np.log1p(-p_plus)
logpost = loglik - (grid - A0) ** 2 / (2 * D0**2)
w = np.exp(logpost - logpost.max())
w /= w.sum()
g_mean = float(w @ grid)
g_std = float(np.sqrt(w @ (grid - g_mean) ** 2))
a_bar = A0 - Z / (TWO_PI * 1.0 * tau1)
d_bar = ZETA / (TWO_PI * 1.0 * tau1)
post_prec = 1 / D0**2 + 1 / d_bar**2
p_mean = (A0 / D0**2 + a_bar / d_bar**2) / post_prec
p_std = 1 / np.sqrt(post_prec)
print(f"  Z = {Z:+.4f}")
print(f"  grid posterior: mean={g_mean:.10f}, std={g_std:.10e}")
print(f"  gaussian pipe : mean={p_mean:.10f}, std={p_std:.10e}")
print(f"  rel diff: mean {abs(g_mean - p_mean) / g_std:.4f} (in std units), std {abs(g_std - p_std) / g_std:.4f}")

section("misc frozen values")
print(f"  Q(rot eps=0.1) = {1 - 0.1**2:.6f}")
print(f"  e^(-2*50/350)  = {np.exp(-100 / 350):.12f}")
print(f"  e^(-1)         = {np.exp(-1):.12f}")
print(f"  cos(2pi*A_TRUE*(tau1)) at tau1={tau1:.6f}: {np.cos(TWO_PI * A_TRUE * tau1):+.12f}")
