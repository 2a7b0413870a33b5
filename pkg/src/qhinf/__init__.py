"""Coherent-feedback H-infinity controller synthesis for quantum linear
systems, built on Lyapunov equations instead of coupled Riccati solves."""

from .options import DEFAULT, NumericOptions
from .qls import (SlhModel, StateSpace, build_complex_system,
                  build_passive_system, check_physical_realizability,
                  doubled_up, flat_adjoint, is_passive, rotate_out_detuning,
                  sharp_adjoint, stability_and_minimality, to_complex_doubled,
                  to_quadrature, transfer_matrix)
from .plant import (AssumptionReport, AxAyPair, HinfPlant, build_plant,
                    check_assumptions, compute_ax_ay)
from .synth import (Controller, LyapunovQuad, SynthesisResult,
                    build_controller, min_certified_gamma, synthesize)
from .passive import (PassivePlant, PassiveThreshold, build_passive_plant,
                      passive_gamma_threshold, synthesize_passive)
from .verify import (AttenuationReport, ClosedLoop, OracleResult, are_oracle,
                     attenuation_certificate, close_loop)
from .devices import (CavitySpec, DpaSpec, build_cavity, build_dpa,
                      cavity_pr_gamma, cavity_reference, dpa_case1_reference,
                      dpa_case2_rho_gamma, dpa_case2_stuv,
                      dpa_case2_thresholds, dpa_pr_gamma_case1,
                      dpa_pr_gamma_case2)

__version__ = "0.1.0"
