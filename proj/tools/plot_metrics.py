#!/usr/bin/env python3
# Copyright 2026 The LT-ADMM-DP Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Plot gradient norm and accuracy curves from one or more metrics CSVs.

Usage: plot_metrics.py run.csv [other.csv ...] --out curves.png
"""

import argparse
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("csv", nargs="+", type=pathlib.Path)
    parser.add_argument("--out", type=pathlib.Path, default="curves.png")
    args = parser.parse_args()

    fig, (ax_grad, ax_acc) = plt.subplots(1, 2, figsize=(11, 4))
    for path in args.csv:
        df = pd.read_csv(path)
        ax_grad.semilogy(df["model_time"], df["grad_norm"], label=path.stem)
        ax_acc.plot(df["model_time"], df["test_acc"], label=path.stem)

    ax_grad.set_xlabel("model time")
    ax_grad.set_ylabel("||grad F(mean x)||")
    ax_acc.set_xlabel("model time")
    ax_acc.set_ylabel("test accuracy")
    for ax in (ax_grad, ax_acc):
        ax.grid(True, alpha=0.3)
        ax.legend()
    fig.tight_layout()
    fig.savefig(args.out, dpi=120)


if __name__ == "__main__":
    main()
