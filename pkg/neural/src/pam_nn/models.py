"""The two recurrent topologies over constraint-tensor window sequences.

Both consume the first T-1 windows of each trace and emit per-cell
probabilities for window T through a sigmoid output of shape (A, A, C).

Convolutional variant: stacked convolutional-recurrent layers (channels
last, square same-padded kernels, batch normalization after each layer)
ending in a 1x1 convolution with sigmoid. Spatial grids are small, so no
pooling is used anywhere.

Encoder-decoder variant: each window flattened to an A*A*C vector, pushed
through a halving dense encoder applied per step, an LSTM core over the
encoded steps, a mirrored dense decoder, and a sigmoid output vector.
"""

from __future__ import annotations

import os

os.environ.setdefault("TF_CPP_MIN_LOG_LEVEL", "2")
os.environ.setdefault("TF_ENABLE_ONEDNN_OPTS", "0")

import tensorflow as tf

from .specs import ConvLstmSpec, EncDecSpec


def _optimizer(name: str):
    # epoch budgets are short (10/20), so a timid learning rate underfits
    if name == "nadam":
        return tf.keras.optimizers.Nadam(learning_rate=0.01)
    return tf.keras.optimizers.Adadelta(learning_rate=1.0)


def build_convlstm(n_act: int, n_chan: int, input_steps: int, spec: ConvLstmSpec):
    inputs = tf.keras.Input(shape=(input_steps, n_act, n_act, n_chan))
    x = inputs
    for layer in range(spec.layers):
        x = tf.keras.layers.ConvLSTM2D(
            filters=spec.filters,
            kernel_size=spec.kernel,
            padding="same",
            return_sequences=layer < spec.layers - 1,
        )(x)
        x = tf.keras.layers.BatchNormalization()(x)
    outputs = tf.keras.layers.Conv2D(n_chan, kernel_size=1, activation="sigmoid")(x)
    model = tf.keras.Model(inputs, outputs, name="convlstm_next_window")
    model.compile(optimizer=_optimizer(spec.optimizer), loss="binary_crossentropy")
    return model


def build_encdec(n_act: int, n_chan: int, input_steps: int, spec: EncDecSpec):
    flat = n_act * n_act * n_chan
    dims = spec.encoder_dims()
    inputs = tf.keras.Input(shape=(input_steps, flat))
    x = inputs
    for dim in dims:
        x = tf.keras.layers.TimeDistributed(tf.keras.layers.Dense(dim, activation="relu"))(x)
    x = tf.keras.layers.LSTM(dims[-1])(x)
    for dim in reversed(dims[:-1]):
        x = tf.keras.layers.Dense(dim, activation="relu")(x)
    outputs = tf.keras.layers.Dense(flat, activation="sigmoid")(x)
    model = tf.keras.Model(inputs, outputs, name="encdec_next_window")
    model.compile(optimizer=_optimizer(spec.optimizer), loss="binary_crossentropy")
    return model
