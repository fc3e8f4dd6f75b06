"""The type VII surface: H1 - 2F pairs negatively with four curves and is not effective."""
from enriques_lattice import build_ambient, cone_membership, phi
from enriques_lattice.config_io import resolve_config

model = build_ambient(resolve_config("type_VII"))
curves = dict(model.curve_classes())
h1, f = model.class_of("H1"), model.class_of("F")
d = h1 - 2 * f

print(f"Phi(H1) = {phi(h1, model).value}, H1.F = {model.pair(h1, f)}")
print(f"(H1 - 2F)^2 = {model.pair(d, d)}")

negative = [n for n, r in curves.items() if model.pair(d, r) < 0]
print("curves meeting H1 - 2F negatively:", ", ".join(negative))
rest = d - sum((curves[n] for n in negative[1:]), curves[negative[0]])
gp = model.class_of("Gprime")
print(f"after removing them, the remainder meets G' with degree {model.pair(rest, gp)}")
print("effective:", cone_membership(d, list(curves.values()), model) is not None)
