"""Walk through the E8-tilde configuration: sequence, Fano class, Phi and the Reye witness."""
from enriques_lattice import (
    build_ambient,
    fano_from_sequence,
    lattice_profile,
    reference_ample,
    reye_criterion,
    sequence_from_decl,
    validate_sequence,
)
from enriques_lattice.config_io import resolve_config

cfg = resolve_config("E8_tilde")
model = build_ambient(cfg)
print("ambient lattice:", lattice_profile(model.lattice))

seq = sequence_from_decl(model, cfg.sequences["main"])
val = validate_sequence(seq, model)
print(f"sequence valid: {val.valid}, degeneracy c = {val.degeneracy}, (sum E)^2 = {val.sum_square}")

rep = fano_from_sequence(seq, model)
print("H over curves:", {k: int(v) for k, v in model.curve_coordinates(rep.H).items()})
print(f"H^2 = {rep.h_square}, Phi(H) = {rep.phi_value}, Fano: {rep.is_fano}")
print("curves orthogonal to H:", ", ".join(rep.orthogonal_curves))

tail = [model.curve(r) for r in rep.tails["F1"]]
res = reye_criterion(rep.H, seq.half_fibers["F1"], tail, model.with_reference(reference_ample(model, rep.H)))
print("H - 3 F1 as a negative definite curve divisor:")
for name, k in res.named_witness().items():
    print(f"  {name}: {k}")
