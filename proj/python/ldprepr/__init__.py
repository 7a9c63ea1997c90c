# Copyright 2026 The ldprepr Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Local differential privacy for fixed-length text representations."""

from ._core import (
    Error,
    FlipRates,
    OmeParams,
    UeParams,
    audit_max_log_ratio,
    decode_value,
    decode_vector,
    empirical_flip_rates,
    encode_value,
    encode_vector,
    load_embeddings,
    ome_params,
    oue_params,
    paired_product_epsilon,
    perturb,
    probability_curves,
    run_experiment,
    sue_params,
    zscore,
)

__all__ = [
    "Error",
    "FlipRates",
    "OmeParams",
    "UeParams",
    "audit_max_log_ratio",
    "decode_value",
    "decode_vector",
    "empirical_flip_rates",
    "encode_value",
    "encode_vector",
    "load_embeddings",
    "ome_params",
    "oue_params",
    "paired_product_epsilon",
    "perturb",
    "probability_curves",
    "run_experiment",
    "sue_params",
    "zscore",
]
