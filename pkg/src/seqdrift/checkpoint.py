"""Checkpoints and canonical state serialization.

Checkpoints are ``.npz`` archives: arrays are stored bit-for-bit, scalar
metadata as a JSON string.  :func:`pack_arrays` gives a flat, order-stable
binary encoding whose length is the state size reported by audits.
"""

from __future__ import annotations

import dataclasses
import io
import json
import struct

import numpy as np

from .discriminator import Discriminator
from .oselm import OselmModel, OselmParams


def model_to_arrays(model: OselmModel, prefix: str = "") -> dict:
    out = {prefix + k: v for k, v in model.arrays().items()}
    out[prefix + "trained_count"] = np.array(model.trained_count, dtype=np.int64)
    return out


def model_from_arrays(params: OselmParams, arrays, prefix: str = "") -> OselmModel:
    return OselmModel(
        params=params,
        alpha=np.array(arrays[prefix + "alpha"]),
        bias=np.array(arrays[prefix + "bias"]),
        beta=np.array(arrays[prefix + "beta"]),
        P=np.array(arrays[prefix + "P"]),
        trained_count=int(arrays[prefix + "trained_count"]),
    )


def save_model(path, model: OselmModel) -> None:
    meta = json.dumps({"params": dataclasses.asdict(model.params)})
    np.savez(path, meta=np.array(meta), **model_to_arrays(model))


def load_model(path) -> OselmModel:
    with np.load(path, allow_pickle=False) as z:
        meta = json.loads(str(z["meta"]))
        return model_from_arrays(OselmParams(**meta["params"]), z)


def discriminator_arrays(d: Discriminator) -> dict:
    out = {"train_cor": d.train_cor, "train_num": d.train_num, "label_map": d.label_map,
           "thresholds": np.array([d.theta_error, d.theta_drift, d.k_err])}
    for c, m in enumerate(d.instances):
        out.update(model_to_arrays(m, f"m{c}_"))
    return out


def save_discriminator(path, d: Discriminator) -> None:
    meta = json.dumps({
        "params": [dataclasses.asdict(m.params) for m in d.instances],
        "theta_error": d.theta_error,
        "theta_drift": d.theta_drift,
        "k_err": d.k_err,
        "base_seed": d.base_seed,
        "generation": d.generation,
    })
    arrays = {k: v for k, v in discriminator_arrays(d).items() if k != "thresholds"}
    np.savez(path, meta=np.array(meta), **arrays)


def load_discriminator(path) -> Discriminator:
    with np.load(path, allow_pickle=False) as z:
        meta = json.loads(str(z["meta"]))
        instances = [model_from_arrays(OselmParams(**p), z, f"m{c}_")
                     for c, p in enumerate(meta["params"])]
        return Discriminator(
            instances=instances,
            train_cor=np.array(z["train_cor"]),
            train_num=np.array(z["train_num"]),
            theta_error=meta["theta_error"],
            theta_drift=meta["theta_drift"],
            k_err=meta["k_err"],
            label_map=np.array(z["label_map"]),
            base_seed=meta["base_seed"],
            generation=meta["generation"],
        )


def pack_arrays(arrays: dict) -> bytes:
    """Flat encoding: per array, name, dtype, shape, then raw little-endian data."""
    buf = io.BytesIO()
    for name in sorted(arrays):
        a = np.ascontiguousarray(arrays[name])
        a = a.astype(a.dtype.newbyteorder("<"), copy=False)
        key = name.encode()
        dt = a.dtype.str.encode()
        buf.write(struct.pack("<H", len(key)) + key)
        buf.write(struct.pack("<B", len(dt)) + dt)
        buf.write(struct.pack("<B", a.ndim) + struct.pack(f"<{a.ndim}Q", *a.shape))
        buf.write(a.tobytes())
    return buf.getvalue()
