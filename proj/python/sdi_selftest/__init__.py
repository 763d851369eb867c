# Copyright 2026 The sdi-selftest Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""Semi-device-independent self-testing for prepare-and-measure scenarios."""

from ._core import (
    Strategy,
    Witness,
    __version__,
    avg_fidelity_states,
    biased_max,
    biased_optimal_overlap,
    biased_rac_witness,
    builtin_witness,
    classical_bound,
    conjectured_curve_states,
    conjectured_upper_bound,
    example2_ideal_strategy,
    example2_witness,
    linear_lower_bound,
    meas_compat_bound_2,
    meas_compat_bound_N,
    optimal_scale,
    prep_compat_bound_2,
    probability,
    q2,
    qutrit_bound,
    qutrit_max,
    rac2_ideal_strategy,
    rac_witness,
    seesaw,
    swap_fidelity_bound,
    sweep_inequalities,
    witness_value,
)

__all__ = [
    "Strategy",
    "Witness",
    "__version__",
    "avg_fidelity_states",
    "biased_max",
    "biased_optimal_overlap",
    "biased_rac_witness",
    "builtin_witness",
    "classical_bound",
    "conjectured_curve_states",
    "conjectured_upper_bound",
    "example2_ideal_strategy",
    "example2_witness",
    "linear_lower_bound",
    "meas_compat_bound_2",
    "meas_compat_bound_N",
    "optimal_scale",
    "prep_compat_bound_2",
    "probability",
    "q2",
    "qutrit_bound",
    "qutrit_max",
    "rac2_ideal_strategy",
    "rac_witness",
    "seesaw",
    "swap_fidelity_bound",
    "sweep_inequalities",
    "witness_value",
]
