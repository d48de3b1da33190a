import numpy as np

from fdrelay.model.system import complex_gaussian
from fdrelay.relay import minorant_diagnostics


class DescribeTangentMinorants:

    def should_minorize_touch_and_match_slopes_on_a_thousand_instances(self):
        """
        Given 1000 random PSD matrices, reference beamformers and reference slacks
        When both minorants are audited
        Then none exceeds its function, both touch it at the reference and their slopes match there
        """
        rng = np.random.default_rng(11)

        for k in range(1000):
            m = int(rng.integers(1, 6))
            rank = int(rng.integers(1, m + 1))
            factor = complex_gaussian(rng, (m, rank), 1.0)
            phi = factor @ factor.conj().T * float(10.0 ** rng.uniform(-2, 2))
            v_ref = complex_gaussian(rng, m, float(10.0 ** rng.uniform(-1, 1)))
            rho_ref = float(10.0 ** rng.uniform(-2, 2))

            report = minorant_diagnostics(phi, v_ref, rho_ref, samples=20, rng=rng)

            assert report.passed, f"instance {k}: {report}"
