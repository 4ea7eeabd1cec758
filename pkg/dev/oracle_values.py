"""Dev-only: compute expected values for tests with mpmath (independent oracle).
Not part of the package. Results get frozen into the test suite."""
import mpmath as mp

mp.mp.dps = 40

OHAT = mp.mpf(210)

print("== medium ==")
# bose closed forms
print("1/(e-1)                 =", mp.nstr(1/(mp.e - 1), 17))
print("coth(1/2)               =", mp.nstr(mp.coth(mp.mpf(1)/2), 17))
# current spectrum drude at x = theta = 1.25
x = mp.mpf("1.25")
resig = OHAT**2 / (1 + x**2)
sj = 2 * x * resig * mp.coth(mp.mpf("0.5"))
print("S_j(x=theta=1.25)       =", mp.nstr(sj, 17))
# permittivity drude x=1
sig = OHAT**2 / (1 - 1j*mp.mpf(1))
eps = 1 + 1j*sig/1
print("eps_r(drude,x=1)        =", mp.nstr(eps, 17))

print("== optics ==")
# skin depth comparison at x=1, p=0
epsr = mp.mpc(1) + 1j*(OHAT**2/(1 - 1j))/1
q = mp.sqrt(epsr * 1)
if mp.re(q) < 0:
    q = -q
qskin = (1 + 1j) * mp.sqrt(OHAT**2 * 1 / 2)
print("q exact                 =", mp.nstr(q, 17))
print("q skin approx           =", mp.nstr(qskin, 17))
print("rel dev                 =", mp.nstr(abs(q - qskin)/abs(q), 5))

print("== kernels ==")
# ideal kernel at Qhat=1, zeta=1
k = mp.sqrt(2)
val = mp.e**-2 * 1 * k / (k + 1)
print("ideal_kernel(1,1)       =", mp.nstr(val, 17))

print("== force: prefactor c ==")
def c_norm_closed(theta):
    beta = 1/mp.mpf(theta)
    u = beta/(2*mp.pi)
    return (beta*mp.log(u) - mp.pi - beta*mp.digamma(u)) / (8*mp.pi)

def c_norm_numeric(theta):
    th = mp.mpf(theta)
    f = lambda xx: xx / mp.expm1(xx/th) / (1 + xx**2)
    val = mp.quad(f, [0, 1, th, 40*th + 40])
    return val / (4*mp.pi*th)

for th in ["0.03", "0.6", "0.75", "1", "1.25", "2.5", "30", "150"]:
    cc = c_norm_closed(th)
    cn = c_norm_numeric(th)
    print(f"c_norm({th:>5})  closed = {mp.nstr(cc, 15):24s} numeric = {mp.nstr(cn, 15):24s} reldiff = {mp.nstr(abs(cc-cn)/cc, 4)}")
print("c_norm(30)/0.125 - 1    =", mp.nstr(c_norm_closed(30)/mp.mpf("0.125") - 1, 6))
print("c_norm(0.03)/(pi*th/24)-1 =", mp.nstr(c_norm_closed("0.03")/(mp.pi*mp.mpf("0.03")/24) - 1, 6))
print("c_norm(150)/0.125 - 1   =", mp.nstr(c_norm_closed(150)/mp.mpf("0.125") - 1, 6))

print("== digamma knowns ==")
print("psi(1)                  =", mp.nstr(mp.digamma(1), 17))
print("psi(1/2)                =", mp.nstr(mp.digamma(mp.mpf(1)/2), 17))
print("psi grid for frozen tests:")
for u in ["1e-6","1e-4","0.01","0.1","0.5","1","1.5","2","3.25","6","10","25","123.456","1e3","1e6"]:
    print(f"  ({u}, {mp.nstr(mp.digamma(mp.mpf(u)), 18)}),")

print("== estimates ==")
# gold-like free-electron inputs
hbar = mp.mpf("1.054571817e-34")
kB = mp.mpf("1.380649e-23")
cl = mp.mpf("299792458.0")
qe = mp.mpf("1.602176634e-19")
eps0 = mp.mpf("8.8541878128e-12")
me = mp.mpf("9.1093837015e-31")
n0 = mp.mpf("5.90e28")
kF = (3*mp.pi**2*n0)**(mp.mpf(1)/3)
vF = hbar*kF/me
Op = mp.sqrt(qe**2*n0/(eps0*me))
lam = cl/Op
print("v_F (free electron)     =", mp.nstr(vF, 10))
print("Omega_p                 =", mp.nstr(Op, 10))
print("lambdabar_p [nm]        =", mp.nstr(lam*1e9, 10))
print("4*pi*alpha              =", mp.nstr(qe**2/(eps0*hbar*cl), 10))
print("(hbar/lam)/(m vF)       =", mp.nstr((hbar/lam)/(me*vF), 10))
tau = hbar/(400*kB)
print("tau(400K)               =", mp.nstr(tau, 10))
print("theta at 300K           =", mp.nstr(300*kB*tau/hbar, 10))
# surface charge factored at 300K
kT = kB*300
print("0.06*(e/lam^2)*(kT/mvF^2) [C/m^2] =", mp.nstr(mp.mpf("0.06")*(qe/lam**2)*(kT/(me*vF**2)), 8))
val = mp.mpf("0.06")*(qe/lam**2)*(kT/(me*vF**2))
print("  in e/um^2             =", mp.nstr(val*mp.mpf("1e-12")/qe, 8))

print("== quadrature oracles ==")
print("int x nbar dx, th=1.25  =", mp.nstr(mp.pi**2*mp.mpf("1.25")**2/6, 17))
print("1/(4 z^2), z=0.7        =", mp.nstr(1/(4*mp.mpf("0.7")**2), 17))
