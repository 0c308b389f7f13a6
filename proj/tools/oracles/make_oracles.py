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
"""Reference values for the C++ unit tests.

Everything here is written from the model equations directly (dense matrix
form, autograd for gradients), sharing no code with the library. Run once
and commit the output:

    python tools/oracles/make_oracles.py > tests/data/oracles.json
"""

import json
import math

import numpy as np
import torch

torch.set_default_dtype(torch.float64)


def hyper(tau_m, tau_s, tau, v_th):
    # Normalizer from the kernel's analytic peak, not from a closed form.
    t_peak = tau_m * tau_s / (tau_m - tau_s) * math.log(tau_m / tau_s)
    peak = math.exp(-t_peak / tau_m) - math.exp(-t_peak / tau_s)
    return dict(tau_m=tau_m, tau_s=tau_s, tau=tau, v_th=v_th,
                alpha=math.exp(-1 / tau_m), beta=math.exp(-1 / tau_s),
                gamma=math.exp(-1 / tau), v0=1.0 / peak, t_peak=t_peak)


class SurrogateSpike(torch.autograd.Function):
    @staticmethod
    def forward(ctx, z):
        ctx.save_for_backward(z)
        return (z >= 0).to(z.dtype)

    @staticmethod
    def backward(ctx, grad):
        (z,) = ctx.saved_tensors
        e = torch.exp(-z.abs())
        return grad * e / (1 + e) ** 2


def run(weights, hp, raster, mode, temperature=1.0):
    """raster: [units, steps] 0/1. Returns output counts (tensor)."""
    steps = raster.shape[1]
    x_all = torch.tensor(raster.T, dtype=torch.float64)
    layer_in = [x_all[t] for t in range(steps)]
    for w in weights:
        n_out, n_in = w.shape
        m = torch.zeros(n_in)
        h = torch.zeros(n_in)
        r = torch.zeros(n_out)
        o = torch.zeros(n_out)
        outs = []
        for t in range(steps):
            s = layer_in[t]
            m = hp["alpha"] * m + s
            h = hp["beta"] * h + s
            current = hp["v0"] * (w @ (m - h))
            r = hp["gamma"] * (r + o)
            v = current - hp["v_th"] * r
            if mode == "smoothed":
                o = torch.sigmoid((v - hp["v_th"]) / temperature)
            else:
                o = SurrogateSpike.apply(v - hp["v_th"])
            outs.append(o)
        layer_in = outs
    return torch.stack(layer_in).sum(0)


def grad_case(rng, sizes, steps, hp, mode, label, temperature=1.0, scale=1.0, p=0.3):
    weights_np = [rng.uniform(-scale, scale, size=(sizes[i + 1], sizes[i]))
                  for i in range(len(sizes) - 1)]
    raster = (rng.random((sizes[0], steps)) < p).astype(np.float64)
    weights = [torch.tensor(w, requires_grad=True) for w in weights_np]
    counts = run(weights, hp, raster, mode, temperature)
    loss = torch.nn.functional.cross_entropy(counts[None, :], torch.tensor([label]))
    loss.backward()
    return dict(
        sizes=sizes, steps=steps, mode=mode, temperature=temperature, label=label,
        hyper={k: hp[k] for k in ("tau_m", "tau_s", "tau", "v_th")},
        weights=[w.ravel().tolist() for w in weights_np],
        events=[[int(t), int(u)] for u, t in zip(*np.nonzero(raster))],
        counts=counts.detach().tolist(), loss=loss.item(),
        grads=[w.grad.ravel().tolist() for w in weights])


def cuba_case(series, population, upsample, valid):
    events = []
    unit = 0
    length = len(series[0])
    for ch in series:
        for tau, gain in population:
            v = 0.0
            for s in range(length * upsample):
                k = s // upsample
                i = ch[k] if k < valid else 0.0
                v = math.exp(-1.0 / tau) * v + gain * i
                if v > 1.0:
                    events.append([s, unit])
                    v = 0.0
            unit += 1
    events.sort()
    return events


def main():
    rng = np.random.default_rng(20260101)
    out = {}

    hp_default = hyper(20.0, 5.0, 20.0, 1.0)
    out["kernel_default"] = {"v0": hp_default["v0"], "t_peak": hp_default["t_peak"]}

    # Smallest k with alpha^k, beta^k, gamma^k all below 1e-12 (iterated products).
    a = b = g = 1.0
    k = 0
    while not (a < 1e-12 and b < 1e-12 and g < 1e-12):
        a *= hp_default["alpha"]
        b *= hp_default["beta"]
        g *= hp_default["gamma"]
        k += 1
    out["lut_horizon_default"] = k

    out["grad_smoothed"] = [
        grad_case(rng, [4, 5, 3], 12, hyper(10.0, 3.0, 8.0, 0.8), "smoothed", 1,
                  temperature=0.7, scale=1.5),
        grad_case(rng, [3, 6, 4, 2], 15, hyper(20.0, 5.0, 20.0, 1.0), "smoothed", 0,
                  temperature=1.0, scale=2.0),
    ]
    out["grad_spiking"] = [
        grad_case(np.random.default_rng(6), [6, 8, 3], 25, hyper(20.0, 5.0, 20.0, 1.0),
                  "spiking", 2, scale=3.0, p=0.5),
        grad_case(rng, [5, 7, 7, 4], 30, hyper(12.0, 4.0, 10.0, 1.0), "spiking", 3,
                  scale=2.5, p=0.4),
    ]

    # Default population grid: tau log-spaced in [2, 50], gains +1,-1,+.5,-.5,+.25.
    taus = [2.0 * (50.0 / 2.0) ** (k / 4) for k in range(5)]
    gains = [1.0, -1.0, 0.5, -0.5, 0.25]
    series = rng.normal(0.0, 1.5, size=(2, 16)).tolist()
    out["cuba"] = {
        "series": series, "upsample": 1, "valid": 16,
        "events": cuba_case(series, list(zip(taus, gains)), 1, 16)}
    out["cuba_upsampled"] = {
        "series": series, "upsample": 3, "valid": 10,
        "events": cuba_case(series, list(zip(taus, gains)), 3, 10)}

    print(json.dumps(out, indent=1))


if __name__ == "__main__":
    main()
