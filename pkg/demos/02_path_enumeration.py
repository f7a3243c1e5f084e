#!/usr/bin/env python3
"""Why the polarizing circuit leaves exactly two detection alternatives.

An entangled (|HH> + |VV>)/sqrt(2) pair entering two unbalanced
polarizing-splitter interferometers can only take short-short (from the HH
term) or long-long (from the VV term): the splitter routes H and V
deterministically so the unbalanced short-long combinations never reach the
detectors.  Replace the polarizing splitters by ordinary 50:50 ones and all
four combinations reappear.
"""

import math

from fransonsim import (StateTerm, TwoPhotonInput, carrier_phase,
                        delay_segment, entangled_input, enumerate_paths,
                        preset_scan, quarter_wave_plate, transfer,
                        PolarizationVector)

ARM_U = [delay_segment(50e-6)]
ARM_L = [delay_segment(80e-6)]


def describe(paths):
    for p in paths:
        kind_u = "short" if p.tau_u == 0.0 else "long "
        kind_l = "short" if p.tau_l == 0.0 else "long "
        print(f"  upper {kind_u}  lower {kind_l}  coeff {p.coeff:+.3f}  "
              f"delays ({p.tau_u * 1e12:6.3f} ps, {p.tau_l * 1e12:6.3f} ps)")


print("polarizing splitters, entangled input:")
paths = enumerate_paths(entangled_input(), ARM_U, ARM_L)
describe(paths)

print("\npolarizing splitters, pure |HH> input (no long route available):")
describe(enumerate_paths(TwoPhotonInput((StateTerm(1.0, "H", "H"),)),
                         ARM_U, ARM_L))

print("\nbalanced 50:50 splitters, single |HH> term (classic unbalanced scheme):")
describe(enumerate_paths(TwoPhotonInput((StateTerm(1.0, "H", "H"),)),
                         ARM_U, ARM_L, splitter="balanced"))

# the long-arm mechanism: a quarter-wave plate at 45 degrees, traversed
# twice around the arm mirror, swaps H and V so the roundtrip photon can
# leave the splitter
once = transfer(quarter_wave_plate(math.pi / 4), PolarizationVector(1.0, 0.0))
twice = transfer(quarter_wave_plate(math.pi / 4), once)
print(f"\nH through a double-passed quarter-wave plate at 45 deg: "
      f"(h, v) = ({abs(twice.h):.3f}, {abs(twice.v):.3f})")

# moving the shared double-sided mirror re-balances the two long arms in
# opposite directions, so the roundtrip pair phase stays pinned at zero
source = preset_scan("fig2a").source
print("\nroundtrip-pair carrier phase along a shared-mirror scan:")
from fransonsim import StageConfig, franson_paths
for dx1_um in (0.0, 25.0, -60.0, 1000.0):
    paths = franson_paths(StageConfig(dx1=dx1_um * 1e-6))
    rr = next(p for p in paths if abs(p.pol_u.v) > 0)
    print(f"  dx1 = {dx1_um:8.1f} um   phase = {carrier_phase(rr, source)}")
