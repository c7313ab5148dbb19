"""Independent numpy evaluation of the fixed-value test cases.

Prints the expected values that are frozen into the C++ tests. Nothing here
imports the library under test.
"""

import numpy as np

np.set_printoptions(precision=17, floatmode="unique")


def section(title):
    print(f"\n# {title}")


section("complex product")
print(complex(0.5, -1.5) * complex(-2.0, 0.25))

section("rfft of [1, 0, -1, 0]")
print(np.fft.rfft([1.0, 0.0, -1.0, 0.0]))

section("2x3 times 3x2")
a = np.array([[1.5, -2.0, 0.25], [3.0, 0.5, -1.0]])
b = np.array([[2.0, -1.0], [0.5, 4.0], [-3.0, 1.5]])
print(a @ b)

section("FreMLP d=2 case, row-vector convention y W")
yr = np.array([[1.0, 0.0]])
yi = np.array([[0.0, 1.0]])
wr = np.array([[1.0, 2.0], [0.0, 1.0]])
wi = np.array([[0.0, 1.0], [1.0, 0.0]])
y = yr + 1j * yi
w = wr + 1j * wi
out = y @ w
print("re", out.real, "im", out.imag)

section("projection N=2 L=3 d=2 d_h=4 tau=2, relu hidden")
n_ch, lb, d, dh, tau = 2, 3, 2, 4, 2
s = np.sin(np.arange(n_ch * lb * d) * 0.7 + 0.3).reshape(n_ch, lb * d)
w1 = np.cos(np.arange(lb * d * dh) * 0.37 - 0.2).reshape(lb * d, dh) * 0.5
b1 = np.array([0.1, -0.2, 0.05, 0.3])
w2 = np.sin(np.arange(dh * tau) * 1.3 + 0.1).reshape(dh, tau)
b2 = np.array([0.25, -0.5])
hidden = np.maximum(s @ w1 + b1, 0.0)
print(hidden @ w2 + b2)

section("Adam first step, g=1, lr=0.1, theta0=0.5")
beta1, beta2, eps, lr = 0.9, 0.999, 1e-8, 0.1
m = (1 - beta1) * 1.0
v = (1 - beta2) * 1.0
m_hat = m / (1 - beta1)
v_hat = v / (1 - beta2)
print(repr(0.5 - lr * m_hat / (np.sqrt(v_hat) + eps)))

section("band-mask mass fractions of an all-ones d=4 matrix, widths 1/3/5")
d = 4
for width in (1, 3, 5):
    half = (width - 1) // 2
    mask = np.abs(np.subtract.outer(np.arange(d), np.arange(d))) <= half
    print(width, mask.sum(), "/", d * d)
