"""LSTM ending classifiers built directly on numpy.

A single LSTM (shared weights) reads the story, and its final state seeds
the encoding of each candidate ending. Three representation variants feed
the softmax head:

* raw      -- o = [e1; e2]                 (final ending hidden states)
* att      -- o = [h*1; h*2]               (attention over story outputs)
* combined -- o = [e1; h*1; e2; h*2]

Attention over story outputs H_1..H_L conditioned on an ending state h_e:
M_t = tanh(W_y H_t + W_h h_e), alpha = softmax_t(w . M_t), r = sum alpha_t H_t,
h* = tanh(W_p r + W_x h_e).

Everything is float64 and hand-differentiated; `backward` returns exact
cross-entropy gradients for every tensor, including paths through the
story-to-ending state seeding and the attention readout. Training uses Adam
with bias correction and is bitwise reproducible under a fixed seed.
"""
from __future__ import annotations

import csv
import enum
import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .annotate import tokenize
from .corpus import ClozeInstance
from .embeddings import EmbeddingTable, lookup
from .errors import ParseError

MAX_SEQUENCE_TOKENS = 128

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


class Variant(enum.Enum):
    RAW = "raw"
    ATTENTION = "att"
    COMBINED = "combined"


@dataclass
class LstmParams:
    w_xi: np.ndarray
    w_hi: np.ndarray
    b_i: np.ndarray
    w_xf: np.ndarray
    w_hf: np.ndarray
    b_f: np.ndarray
    w_xg: np.ndarray
    w_hg: np.ndarray
    b_g: np.ndarray
    w_xo: np.ndarray
    w_ho: np.ndarray
    b_o: np.ndarray

    @property
    def hidden_size(self) -> int:
        return self.w_xi.shape[0]

    @property
    def input_size(self) -> int:
        return self.w_xi.shape[1]


@dataclass
class AttentionParams:
    w_y: np.ndarray
    w_h: np.ndarray
    w: np.ndarray
    w_p: np.ndarray
    w_x: np.ndarray


@dataclass
class ClassifierHead:
    w_out: np.ndarray
    b_out: np.ndarray


@dataclass
class ModelParams:
    lstm: LstmParams
    attention: AttentionParams | None
    head: ClassifierHead
    variant: Variant


def representation_width(variant: Variant, hidden_size: int) -> int:
    return 4 * hidden_size if variant is Variant.COMBINED else 2 * hidden_size


def tensors(params: ModelParams) -> dict[str, np.ndarray]:
    """Stable name -> array view of every trainable tensor."""
    out: dict[str, np.ndarray] = {}
    for name in ("w_xi", "w_hi", "b_i", "w_xf", "w_hf", "b_f",
                 "w_xg", "w_hg", "b_g", "w_xo", "w_ho", "b_o"):
        out[f"lstm.{name}"] = getattr(params.lstm, name)
    if params.attention is not None:
        for name in ("w_y", "w_h", "w", "w_p", "w_x"):
            out[f"att.{name}"] = getattr(params.attention, name)
    out["head.w_out"] = params.head.w_out
    out["head.b_out"] = params.head.b_out
    return out


def _xavier(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    if len(shape) == 1:
        fan_in, fan_out = shape[0], 1
    else:
        fan_out, fan_in = shape
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


def init_params(seed: int, d: int, h: int, variant: Variant) -> ModelParams:
    """Xavier-uniform weights, zero biases; draw order is fixed for determinism."""
    rng = np.random.default_rng(seed)
    def gate() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return _xavier(rng, (h, d)), _xavier(rng, (h, h)), np.zeros(h)
    w_xi, w_hi, b_i = gate()
    w_xf, w_hf, b_f = gate()
    w_xg, w_hg, b_g = gate()
    w_xo, w_ho, b_o = gate()
    lstm = LstmParams(w_xi, w_hi, b_i, w_xf, w_hf, b_f,
                      w_xg, w_hg, b_g, w_xo, w_ho, b_o)
    attention = None
    if variant is not Variant.RAW:
        attention = AttentionParams(
            w_y=_xavier(rng, (h, h)),
            w_h=_xavier(rng, (h, h)),
            w=_xavier(rng, (h,)),
            w_p=_xavier(rng, (h, h)),
            w_x=_xavier(rng, (h, h)),
        )
    width = representation_width(variant, h)
    head = ClassifierHead(w_out=_xavier(rng, (2, width)), b_out=np.zeros(2))
    return ModelParams(lstm=lstm, attention=attention, head=head, variant=variant)


def clone_params(params: ModelParams) -> ModelParams:
    lstm = LstmParams(*(getattr(params.lstm, f).copy() for f in (
        "w_xi", "w_hi", "b_i", "w_xf", "w_hf", "b_f",
        "w_xg", "w_hg", "b_g", "w_xo", "w_ho", "b_o")))
    attention = None
    if params.attention is not None:
        attention = AttentionParams(*(getattr(params.attention, f).copy()
                                      for f in ("w_y", "w_h", "w", "w_p", "w_x")))
    head = ClassifierHead(params.head.w_out.copy(), params.head.b_out.copy())
    return ModelParams(lstm=lstm, attention=attention, head=head,
                       variant=params.variant)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(z, -500.0, 500.0)))


def lstm_step(params: LstmParams, x: np.ndarray, h: np.ndarray,
              c: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if x.shape != (params.input_size,) or h.shape != (params.hidden_size,):
        raise ValueError(f"input {x.shape} / state {h.shape} do not match "
                         f"LSTM of d={params.input_size}, h={params.hidden_size}")
    i = _sigmoid(params.w_xi @ x + params.w_hi @ h + params.b_i)
    f = _sigmoid(params.w_xf @ x + params.w_hf @ h + params.b_f)
    g = np.tanh(params.w_xg @ x + params.w_hg @ h + params.b_g)
    o = _sigmoid(params.w_xo @ x + params.w_ho @ h + params.b_o)
    c_new = f * c + i * g
    h_new = o * np.tanh(c_new)
    return h_new, c_new


@dataclass
class _EncodeCache:
    xs: np.ndarray
    h0: np.ndarray
    c0: np.ndarray
    i: np.ndarray
    f: np.ndarray
    g: np.ndarray
    o: np.ndarray
    c: np.ndarray
    tanh_c: np.ndarray
    h: np.ndarray


def _encode_full(params: LstmParams, xs: np.ndarray, h0: np.ndarray,
                 c0: np.ndarray) -> _EncodeCache:
    length = xs.shape[0]
    if length == 0:
        raise ValueError("cannot encode an empty sequence")
    h_size = params.hidden_size
    cache = _EncodeCache(
        xs=xs, h0=h0, c0=c0,
        i=np.empty((length, h_size)), f=np.empty((length, h_size)),
        g=np.empty((length, h_size)), o=np.empty((length, h_size)),
        c=np.empty((length, h_size)), tanh_c=np.empty((length, h_size)),
        h=np.empty((length, h_size)),
    )
    h, c = h0, c0
    for t in range(length):
        x = xs[t]
        i = _sigmoid(params.w_xi @ x + params.w_hi @ h + params.b_i)
        f = _sigmoid(params.w_xf @ x + params.w_hf @ h + params.b_f)
        g = np.tanh(params.w_xg @ x + params.w_hg @ h + params.b_g)
        o = _sigmoid(params.w_xo @ x + params.w_ho @ h + params.b_o)
        c = f * c + i * g
        tanh_c = np.tanh(c)
        h = o * tanh_c
        cache.i[t], cache.f[t], cache.g[t] = i, f, g
        cache.o[t], cache.c[t], cache.tanh_c[t], cache.h[t] = o, c, tanh_c, h
    return cache


def encode(params: LstmParams, xs: np.ndarray, h0: np.ndarray,
           c0: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Fold lstm_step over a sequence; returns (all outputs, h_last, c_last)."""
    cache = _encode_full(params, xs, h0, c0)
    return cache.h, cache.h[-1], cache.c[-1]


@dataclass
class _AttendCache:
    outputs: np.ndarray
    h_e: np.ndarray
    m: np.ndarray
    alpha: np.ndarray
    r: np.ndarray
    h_star: np.ndarray


def _attend_full(ap: AttentionParams, outputs: np.ndarray,
                 h_e: np.ndarray) -> _AttendCache:
    m = np.tanh(outputs @ ap.w_y.T + ap.w_h @ h_e)
    scores = m @ ap.w
    shifted = scores - scores.max()
    exp = np.exp(shifted)
    alpha = exp / exp.sum()
    r = outputs.T @ alpha
    h_star = np.tanh(ap.w_p @ r + ap.w_x @ h_e)
    return _AttendCache(outputs=outputs, h_e=h_e, m=m, alpha=alpha, r=r,
                        h_star=h_star)


def attend(ap: AttentionParams, outputs: np.ndarray,
           h_e: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Attention readout over story outputs; returns (h_star, alpha)."""
    cache = _attend_full(ap, outputs, h_e)
    return cache.h_star, cache.alpha


@dataclass(frozen=True)
class EmbeddedInstance:
    """An instance mapped to embedding matrices; OOV tokens become zero rows."""
    id: str
    story: np.ndarray
    ending1: np.ndarray
    ending2: np.ndarray
    gold: int | None


def embed_tokens(tokens: Sequence[str], table: EmbeddingTable,
                 max_tokens: int = MAX_SEQUENCE_TOKENS) -> np.ndarray:
    rows = []
    for token in tokens[:max_tokens]:
        vec = lookup(table, token)
        rows.append(np.zeros(table.dim) if vec is None else vec)
    if not rows:
        raise ValueError("cannot embed an empty token sequence")
    return np.stack(rows)


def embed_instance(instance: ClozeInstance, table: EmbeddingTable,
                   max_tokens: int = MAX_SEQUENCE_TOKENS) -> EmbeddedInstance:
    story_tokens = [tok for s in instance.context for tok in tokenize(s)]
    return EmbeddedInstance(
        id=instance.id,
        story=embed_tokens(story_tokens, table, max_tokens),
        ending1=embed_tokens(tokenize(instance.ending1), table, max_tokens),
        ending2=embed_tokens(tokenize(instance.ending2), table, max_tokens),
        gold=instance.gold,
    )


@dataclass
class ForwardCache:
    params: ModelParams
    story: _EncodeCache
    endings: tuple[_EncodeCache, _EncodeCache]
    attends: tuple[_AttendCache, _AttendCache] | None
    o_vec: np.ndarray
    probs: np.ndarray


def forward(inst: EmbeddedInstance, params: ModelParams) -> tuple[np.ndarray, ForwardCache]:
    h_size = params.lstm.hidden_size
    zeros = np.zeros(h_size)
    story = _encode_full(params.lstm, inst.story, zeros, zeros)
    h_s, c_s = story.h[-1], story.c[-1]
    e1 = _encode_full(params.lstm, inst.ending1, h_s, c_s)
    e2 = _encode_full(params.lstm, inst.ending2, h_s, c_s)

    attends = None
    if params.variant is Variant.RAW:
        o_vec = np.concatenate([e1.h[-1], e2.h[-1]])
    else:
        assert params.attention is not None
        a1 = _attend_full(params.attention, story.h, e1.h[-1])
        a2 = _attend_full(params.attention, story.h, e2.h[-1])
        attends = (a1, a2)
        if params.variant is Variant.ATTENTION:
            o_vec = np.concatenate([a1.h_star, a2.h_star])
        else:
            o_vec = np.concatenate([e1.h[-1], a1.h_star, e2.h[-1], a2.h_star])

    logits = params.head.w_out @ o_vec + params.head.b_out
    shifted = logits - logits.max()
    exp = np.exp(shifted)
    probs = exp / exp.sum()
    cache = ForwardCache(params=params, story=story, endings=(e1, e2),
                         attends=attends, o_vec=o_vec, probs=probs)
    return probs, cache


def cross_entropy(probs: np.ndarray, gold: int) -> float:
    return float(-np.log(probs[gold - 1]))


def zero_grads(params: ModelParams) -> dict[str, np.ndarray]:
    return {name: np.zeros_like(arr) for name, arr in tensors(params).items()}


def _lstm_backward(params: LstmParams, cache: _EncodeCache,
                   d_outputs: np.ndarray | None, d_h_last: np.ndarray,
                   d_c_last: np.ndarray,
                   grads: Mapping[str, np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Backprop one encoded sequence; returns gradients w.r.t. (h0, c0).

    d_outputs carries gradient into every per-step output h_t (attention);
    d_h_last / d_c_last carry gradient into the final state (state seeding,
    raw ending representation).
    """
    carry_dh = d_h_last.copy()
    carry_dc = d_c_last.copy()
    for t in range(cache.xs.shape[0] - 1, -1, -1):
        dh = carry_dh if d_outputs is None else carry_dh + d_outputs[t]
        i, f, g, o = cache.i[t], cache.f[t], cache.g[t], cache.o[t]
        tanh_c = cache.tanh_c[t]
        prev_h = cache.h[t - 1] if t > 0 else cache.h0
        prev_c = cache.c[t - 1] if t > 0 else cache.c0
        do_gate = dh * tanh_c
        dc = carry_dc + dh * o * (1.0 - tanh_c ** 2)
        di = dc * g
        dg = dc * i
        df = dc * prev_c
        carry_dc = dc * f
        da_i = di * i * (1.0 - i)
        da_f = df * f * (1.0 - f)
        da_g = dg * (1.0 - g ** 2)
        da_o = do_gate * o * (1.0 - o)
        x = cache.xs[t]
        grads["lstm.w_xi"] += np.outer(da_i, x)
        grads["lstm.w_hi"] += np.outer(da_i, prev_h)
        grads["lstm.b_i"] += da_i
        grads["lstm.w_xf"] += np.outer(da_f, x)
        grads["lstm.w_hf"] += np.outer(da_f, prev_h)
        grads["lstm.b_f"] += da_f
        grads["lstm.w_xg"] += np.outer(da_g, x)
        grads["lstm.w_hg"] += np.outer(da_g, prev_h)
        grads["lstm.b_g"] += da_g
        grads["lstm.w_xo"] += np.outer(da_o, x)
        grads["lstm.w_ho"] += np.outer(da_o, prev_h)
        grads["lstm.b_o"] += da_o
        carry_dh = (params.w_hi.T @ da_i + params.w_hf.T @ da_f
                    + params.w_hg.T @ da_g + params.w_ho.T @ da_o)
    return carry_dh, carry_dc


def _attend_backward(ap: AttentionParams, cache: _AttendCache,
                     d_h_star: np.ndarray,
                     grads: Mapping[str, np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Backprop the attention readout; returns (d_outputs, d_h_e)."""
    dz = d_h_star * (1.0 - cache.h_star ** 2)
    grads["att.w_p"] += np.outer(dz, cache.r)
    grads["att.w_x"] += np.outer(dz, cache.h_e)
    dr = ap.w_p.T @ dz
    d_h_e = ap.w_x.T @ dz
    d_alpha = cache.outputs @ dr
    d_outputs = np.outer(cache.alpha, dr)
    ds = cache.alpha * (d_alpha - float(cache.alpha @ d_alpha))
    grads["att.w"] += cache.m.T @ ds
    dm = np.outer(ds, ap.w)
    da = dm * (1.0 - cache.m ** 2)
    grads["att.w_y"] += da.T @ cache.outputs
    da_sum = da.sum(axis=0)
    grads["att.w_h"] += np.outer(da_sum, cache.h_e)
    d_outputs += da @ ap.w_y
    d_h_e += ap.w_h.T @ da_sum
    return d_outputs, d_h_e


def backward(cache: ForwardCache, gold: int) -> dict[str, np.ndarray]:
    """Exact cross-entropy gradients for every tensor of the model."""
    if gold not in (1, 2):
        raise ValueError(f"gold label must be 1 or 2, got {gold!r}")
    params = cache.params
    h_size = params.lstm.hidden_size
    grads = zero_grads(params)

    d_logits = cache.probs.copy()
    d_logits[gold - 1] -= 1.0
    grads["head.w_out"] += np.outer(d_logits, cache.o_vec)
    grads["head.b_out"] += d_logits
    d_o = params.head.w_out.T @ d_logits

    if params.variant is Variant.RAW:
        d_e = [d_o[:h_size], d_o[h_size:]]
        d_h_star = [None, None]
    elif params.variant is Variant.ATTENTION:
        d_e = [np.zeros(h_size), np.zeros(h_size)]
        d_h_star = [d_o[:h_size], d_o[h_size:]]
    else:
        d_e = [d_o[0:h_size], d_o[2 * h_size:3 * h_size]]
        d_h_star = [d_o[h_size:2 * h_size], d_o[3 * h_size:4 * h_size]]

    d_story_outputs = np.zeros_like(cache.story.h)
    d_story_h = np.zeros(h_size)
    d_story_c = np.zeros(h_size)
    for k in (0, 1):
        d_h_last = d_e[k].copy()
        if d_h_star[k] is not None:
            assert cache.attends is not None and params.attention is not None
            d_out, d_h_e = _attend_backward(params.attention, cache.attends[k],
                                            d_h_star[k], grads)
            d_story_outputs += d_out
            d_h_last += d_h_e
        d_h0, d_c0 = _lstm_backward(params.lstm, cache.endings[k], None,
                                    d_h_last, np.zeros(h_size), grads)
        d_story_h += d_h0
        d_story_c += d_c0
    _lstm_backward(params.lstm, cache.story, d_story_outputs,
                   d_story_h, d_story_c, grads)
    return grads


@dataclass
class AdamState:
    m: dict[str, np.ndarray]
    v: dict[str, np.ndarray]
    step: int = 0


def adam_init(params: ModelParams) -> AdamState:
    return AdamState(
        m={k: np.zeros_like(a) for k, a in tensors(params).items()},
        v={k: np.zeros_like(a) for k, a in tensors(params).items()},
    )


def adam_update(params: ModelParams, state: AdamState,
                grads: Mapping[str, np.ndarray], lr: float) -> None:
    """One in-place Adam step with bias correction."""
    state.step += 1
    t = state.step
    for name, arr in tensors(params).items():
        g = grads[name]
        state.m[name] = ADAM_BETA1 * state.m[name] + (1.0 - ADAM_BETA1) * g
        state.v[name] = ADAM_BETA2 * state.v[name] + (1.0 - ADAM_BETA2) * g * g
        m_hat = state.m[name] / (1.0 - ADAM_BETA1 ** t)
        v_hat = state.v[name] / (1.0 - ADAM_BETA2 ** t)
        arr -= lr * m_hat / (np.sqrt(v_hat) + ADAM_EPS)


HIDDEN_GRID = (128, 256, 384, 512)
BATCH_GRID = (50, 100, 200, 300, 400, 500)


@dataclass(frozen=True)
class TrainConfig:
    hidden_size: int
    batch_size: int
    epochs: int
    learning_rate: float
    seed: int
    variant: Variant
    restarts: int = 1

    def __post_init__(self) -> None:
        for name in ("hidden_size", "batch_size", "epochs",
                     "learning_rate", "restarts"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class TrainResult:
    params: ModelParams
    best_epoch: int
    best_dev_accuracy: float
    epoch_dev_accuracies: tuple[float, ...]


def predict_neural(inst: EmbeddedInstance, params: ModelParams) -> tuple[int, np.ndarray]:
    probs, _ = forward(inst, params)
    return int(np.argmax(probs)) + 1, probs


def evaluate_model(instances: Sequence[EmbeddedInstance],
                   params: ModelParams) -> float:
    if not instances:
        raise ValueError("nothing to evaluate")
    correct = 0
    for inst in instances:
        if inst.gold is None:
            raise ValueError(f"instance {inst.id} is unlabeled")
        if predict_neural(inst, params)[0] == inst.gold:
            correct += 1
    return correct / len(instances)


def train_model(train: Sequence[EmbeddedInstance],
                dev: Sequence[EmbeddedInstance],
                config: TrainConfig) -> TrainResult:
    """One training run: per-epoch dev eval, best epoch kept (ties -> earlier)."""
    if not train or not dev:
        raise ValueError("train and dev sets must be nonempty")
    d = train[0].story.shape[1]
    params = init_params(config.seed, d, config.hidden_size, config.variant)
    state = adam_init(params)
    shuffler = random.Random(f"train:{config.seed}")
    order = list(range(len(train)))

    best_epoch = 0
    best_acc = -1.0
    best_params = clone_params(params)
    accuracies: list[float] = []
    for epoch in range(1, config.epochs + 1):
        shuffler.shuffle(order)
        for start in range(0, len(order), config.batch_size):
            batch = order[start:start + config.batch_size]
            grads = zero_grads(params)
            for idx in batch:
                inst = train[idx]
                if inst.gold is None:
                    raise ValueError(f"instance {inst.id} is unlabeled")
                _, cache = forward(inst, params)
                for name, g in backward(cache, inst.gold).items():
                    grads[name] += g
            for name in grads:
                grads[name] /= len(batch)
            adam_update(params, state, grads, config.learning_rate)
        acc = evaluate_model(dev, params)
        accuracies.append(acc)
        if acc > best_acc:
            best_acc = acc
            best_epoch = epoch
            best_params = clone_params(params)
    return TrainResult(params=best_params, best_epoch=best_epoch,
                       best_dev_accuracy=best_acc,
                       epoch_dev_accuracies=tuple(accuracies))


@dataclass(frozen=True)
class RunRecord:
    hidden_size: int
    batch_size: int
    restart: int
    best_epoch: int
    dev_accuracy: float


@dataclass
class GridCell:
    hidden_size: int
    batch_size: int
    runs: tuple[RunRecord, ...]

    @property
    def best(self) -> RunRecord:
        return max(self.runs, key=lambda r: (r.dev_accuracy, -r.restart))


@dataclass
class GridSearchResult:
    cells: tuple[GridCell, ...]
    best_params: ModelParams
    best_run: RunRecord


def grid_search(train: Sequence[EmbeddedInstance],
                dev: Sequence[EmbeddedInstance],
                variant: Variant,
                hidden_grid: Sequence[int] = HIDDEN_GRID,
                batch_grid: Sequence[int] = BATCH_GRID,
                epochs: int = 10,
                learning_rate: float = 0.001,
                restarts: int = 5,
                base_seed: int = 0) -> GridSearchResult:
    """Train `restarts` models per (hidden, batch) cell; keep the global best."""
    if not hidden_grid or not batch_grid:
        raise ValueError("grid axes must be nonempty")
    cells: list[GridCell] = []
    best_params: ModelParams | None = None
    best_run: RunRecord | None = None
    for hi, hidden in enumerate(hidden_grid):
        for bi, batch in enumerate(batch_grid):
            runs: list[RunRecord] = []
            for r in range(restarts):
                seed = ((base_seed * len(hidden_grid) + hi)
                        * len(batch_grid) + bi) * restarts + r
                config = TrainConfig(hidden_size=hidden, batch_size=batch,
                                     epochs=epochs, learning_rate=learning_rate,
                                     seed=seed, variant=variant,
                                     restarts=restarts)
                result = train_model(train, dev, config)
                record = RunRecord(hidden_size=hidden, batch_size=batch,
                                   restart=r, best_epoch=result.best_epoch,
                                   dev_accuracy=result.best_dev_accuracy)
                runs.append(record)
                if best_run is None or record.dev_accuracy > best_run.dev_accuracy:
                    best_run = record
                    best_params = result.params
            cells.append(GridCell(hidden_size=hidden, batch_size=batch,
                                  runs=tuple(runs)))
    assert best_params is not None and best_run is not None
    return GridSearchResult(cells=tuple(cells), best_params=best_params,
                            best_run=best_run)


def save_grid_report(path: str | Path, result: GridSearchResult) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["hidden", "batch", "restart", "best_epoch",
                         "dev_accuracy"])
        for cell in result.cells:
            for run in cell.runs:
                writer.writerow([run.hidden_size, run.batch_size, run.restart,
                                 run.best_epoch, repr(run.dev_accuracy)])


CHECKPOINT_VERSION = 1


def save_checkpoint(path: str | Path, params: ModelParams) -> None:
    meta = {
        "version": CHECKPOINT_VERSION,
        "variant": params.variant.value,
        "input_size": params.lstm.input_size,
        "hidden_size": params.lstm.hidden_size,
    }
    arrays = dict(tensors(params))
    arrays["__meta__"] = np.asarray(json.dumps(meta))
    with open(path, "wb") as handle:   # keep the exact path (no .npz appended)
        np.savez(handle, **arrays)


def load_checkpoint(path: str | Path) -> ModelParams:
    path = Path(path)
    with np.load(path, allow_pickle=False) as data:
        if "__meta__" not in data:
            raise ParseError(f"{path}: not a model checkpoint (no metadata)")
        meta = json.loads(str(data["__meta__"]))
        if meta.get("version") != CHECKPOINT_VERSION:
            raise ParseError(f"{path}: unsupported checkpoint version "
                             f"{meta.get('version')!r}")
        variant = Variant(meta["variant"])
        d, h = int(meta["input_size"]), int(meta["hidden_size"])
        params = init_params(0, d, h, variant)
        for name, arr in tensors(params).items():
            if name not in data:
                raise ParseError(f"{path}: checkpoint missing tensor {name!r}")
            stored = data[name]
            if stored.shape != arr.shape:
                raise ParseError(f"{path}: tensor {name!r} has shape "
                                 f"{stored.shape}, expected {arr.shape}")
            arr[...] = stored
    return params
