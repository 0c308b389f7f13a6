# Copyright 2026 The spikets Authors
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

"""Spiking neural networks for multivariate time-series classification."""

from ._spikets import (
    ChecksumError,
    ConfigError,
    ContractError,
    DataError,
    Error,
    Layer,
    NeuronHyperParams,
    NumericError,
    SpikeRaster,
    coding_stats,
    cuba_encode,
    evaluate,
    event_forward,
    forward,
    gradcheck,
    init_network,
    kernel_value,
    layer_sizes,
    load_checkpoint,
    load_ts_file,
    lstm_parameter_count,
    parse_ts,
    predict_class,
    psp_check,
    rate_encode,
    rnn_parameter_count,
    save_checkpoint,
    serialize_ts,
    snn_parameter_count,
    train,
)

__version__ = "0.1.0"
__all__ = [name for name in dir() if not name.startswith("_")]
