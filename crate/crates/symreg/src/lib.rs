//! Symbolic regression that improves with pre-training.
//!
//! This crate implements the full pipeline end to end on ordinary CPUs:
//!
//! * [`expr`] — expression trees over a fixed 33-token vocabulary, prefix
//!   serialization, evaluation, bounded simplification, and skeletons whose
//!   numeric constants are placeholder symbols;
//! * [`datagen`] — procedural generation of skeleton pools and training
//!   batches, with half-precision multi-hot input encoding;
//! * [`model`] — a permutation-invariant set encoder (induced set attention
//!   plus attention pooling) and an autoregressive decoder, trained by
//!   cross-entropy with exact hand-derived gradients;
//! * [`optim`] — BFGS with a strong-Wolfe line search, used to fit skeleton
//!   constants to data;
//! * [`inference`] — beam-search decoding, constant placement and fitting,
//!   and penalized model selection;
//! * [`eval`] — benchmark suites and the A1/A2 accuracy metrics, in and out
//!   of distribution;
//! * [`gp`] — a genetic-programming baseline regressor.
//!
//! The `symreg` command-line tool wires these into reproducible pipelines;
//! the book under `book/` walks through the concepts chapter by chapter.

pub mod datagen;
pub mod eval;
pub mod expr;
pub mod gp;
pub mod inference;
pub mod model;
pub mod optim;
pub mod parallel;
pub mod rng;
