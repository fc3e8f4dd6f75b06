"""Build a Fano class from an isotropic 10-sequence in U + E8(-1) and apply the hat transform."""
from enriques_lattice import IsotropicSequence, e10_standard, fano_from_sequence, hat_transform, pair
from enriques_lattice.standard_models import isotropic_ten_sequence

lat = e10_standard()
basis = isotropic_ten_sequence(lat)
seq = IsotropicSequence(basis, tuple((f"F{i}", ()) for i in range(1, 11)),
                        {f"F{i}": b for i, b in enumerate(basis, 1)})
rep = fano_from_sequence(seq, lat)
print("H =", rep.H.as_ints(), f"H^2 = {rep.h_square}, Phi = {rep.phi_value}")

for triple in [(0, 1, 2), (3, 6, 9)]:
    res = hat_transform(rep.H, [(basis[k], []) for k in triple], lat)
    print(f"triple {triple}: hat^2 = {res.h_hat_square}, H.hat = {res.h_dot_hat}, "
          f"Phi(hat) = {res.report.phi_value}, inherited degrees {[int(x) for x in res.inherited_degrees]}")
    assert pair(lat, res.h_hat, res.h_hat) == 10
