// Copyright 2026 The fftgen Authors
//
// Licensed under the Apache License v2.0 with LLVM Exceptions.
// See https://llvm.org/LICENSE.txt for license information.
// SPDX-License-Identifier: Apache-2.0 WITH LLVM-exception
//
// Loop-level transforms: tiling (exact size or cache-volume driven) and
// vectorization (inner/outer position, optional interleaved-access rewrite
// that turns complex-pair gathers into unit-stride loads plus shuffles).

#include "fftgen/loopir.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace fftgen {

namespace {

void map_stmt_exprs(Stmt &s, const std::function<AffineExpr(const AffineExpr &)> &f) {
  if (auto *mv = std::get_if<CMatVec>(&s)) {
    mv->in.slice.start = f(mv->in.slice.start);
    mv->out.slice.start = f(mv->out.slice.start);
  } else if (auto *pm = std::get_if<CPointMul>(&s)) {
    pm->coeff.slice.start = f(pm->coeff.slice.start);
    pm->in.slice.start = f(pm->in.slice.start);
    pm->out.slice.start = f(pm->out.slice.start);
  } else if (auto *cp = std::get_if<CCopy>(&s)) {
    cp->in.slice.start = f(cp->in.slice.start);
    cp->out.slice.start = f(cp->out.slice.start);
  } else if (auto *ld = std::get_if<FLoad>(&s)) {
    ld->idx = f(ld->idx);
  } else if (auto *st = std::get_if<FStore>(&s)) {
    st->idx = f(st->idx);
  } else if (auto *fc = std::get_if<FCopy>(&s)) {
    fc->in_idx = f(fc->in_idx);
    fc->out_idx = f(fc->out_idx);
  } else if (auto *vl = std::get_if<VLoad>(&s)) {
    vl->idx = f(vl->idx);
  } else if (auto *vs = std::get_if<VStore>(&s)) {
    vs->idx = f(vs->idx);
  }
}

// Floats touched by one iteration of the outermost loop, inner loops included.
int64_t iteration_footprint_floats(const LoopNest &nest) {
  int64_t inner_iters = 1;
  for (size_t i = 1; i < nest.loops.size(); ++i)
    inner_iters *= loop_trip_count(nest.loops[i]);
  int64_t per_body = 0;
  for (const Stmt &s : nest.body) {
    if (const auto *mv = std::get_if<CMatVec>(&s))
      per_body += 2 * (mv->in.slice.count + mv->out.slice.count);
    else if (std::holds_alternative<CPointMul>(s))
      per_body += 6;
    else if (const auto *cp = std::get_if<CCopy>(&s))
      per_body += 2 * (cp->in.slice.count + cp->out.slice.count);
    else if (std::holds_alternative<FLoad>(s) ||
             std::holds_alternative<FStore>(s))
      per_body += 1;
    else if (const auto *fc = std::get_if<FCopy>(&s))
      per_body += 2 * fc->count;
    else if (std::holds_alternative<VLoad>(s) ||
             std::holds_alternative<VStore>(s))
      per_body += 1;
  }
  return per_body * inner_iters;
}

} // namespace

std::vector<LoopNest> tile_nest(const LoopNest &nest, const TilePolicy &policy,
                                LoopProgram &prog) {
  if (nest.loops.empty())
    return {nest};
  const Loop target = nest.loops.front();
  const int64_t trip = loop_trip_count(target);
  if (trip == 0)
    return {nest};

  int64_t t = 0;
  if (policy.kind == TilePolicy::ExactSize) {
    if (policy.value <= 0)
      throw LowerError("tile size must be positive, got " +
                       std::to_string(policy.value));
    t = policy.value;
  } else {
    const int64_t fp_bytes = iteration_footprint_floats(nest) * 8;
    if (fp_bytes == 0)
      return {nest};
    if (policy.value < fp_bytes)
      throw LowerError("cache volume " + std::to_string(policy.value) +
                       " bytes is smaller than one iteration's footprint of " +
                       std::to_string(fp_bytes) + " bytes");
    t = policy.value / fp_bytes;
  }
  t = std::min(t, trip);

  const int64_t n_tiles = trip / t;
  const int64_t rem = trip % t;

  const int32_t outer_var = prog.next_var++;
  const int32_t inner_var = prog.next_var++;

  // Original iv = lower + (outer*t + inner) * step.
  LoopNest main = nest;
  Loop outer{outer_var, 0, n_tiles, 1, target.parallel, t, {}};
  Loop inner{inner_var, 0, t, 1, target.parallel, {}, {}};
  main.loops.erase(main.loops.begin());
  main.loops.insert(main.loops.begin(), {outer, inner});
  const AffineExpr repl_main =
      (AffineExpr::var(outer_var, t) + AffineExpr::var(inner_var)) * target.step +
      target.lower;
  for (Stmt &s : main.body)
    map_stmt_exprs(s, [&](const AffineExpr &e) {
      return e.substitute(target.var, repl_main);
    });

  std::vector<LoopNest> out;
  if (n_tiles > 0)
    out.push_back(std::move(main));
  if (rem > 0) {
    const int32_t rem_var = prog.next_var++;
    LoopNest tail = nest;
    tail.loops.front() = Loop{rem_var, 0, rem, 1, target.parallel, {}, {}};
    const AffineExpr repl_tail =
        (AffineExpr::var(rem_var) + n_tiles * t) * target.step + target.lower;
    for (Stmt &s : tail.body)
      map_stmt_exprs(s, [&](const AffineExpr &e) {
        return e.substitute(target.var, repl_tail);
      });
    out.push_back(std::move(tail));
  }
  return out;
}

LoopProgram tile(const LoopProgram &prog, const TilePolicy &policy) {
  LoopProgram out = prog;
  out.nests.clear();
  for (const LoopNest &nest : prog.nests)
    for (LoopNest &result : tile_nest(nest, policy, out))
      out.nests.push_back(std::move(result));
  return out;
}

namespace {

bool is_pow2(int64_t n) { return n >= 1 && (n & (n - 1)) == 0; }

struct PairKey {
  int32_t buf;
  AffineExpr base;
  bool operator==(const PairKey &o) const = default;
};

class Vectorizer {
public:
  explicit Vectorizer(const VectorizeOptions &opts) : opts_(opts) {}

  std::vector<LoopNest> run(const LoopNest &nest) {
    if (nest.loops.empty())
      return {nest};
    const size_t loop_idx =
        opts_.position == VecPosition::Inner ? nest.loops.size() - 1 : 0;
    const Loop target = nest.loops[loop_idx];
    if (!target.parallel)
      throw LowerError("cannot vectorize a non-parallel loop");

    if (opts_.width == 1) {
      LoopNest annotated = nest;
      annotated.loops[loop_idx].vec =
          VecInfo{1, opts_.position, target.step};
      return {annotated};
    }

    for (const Stmt &s : nest.body) {
      if (is_complex_stmt(s))
        throw LowerError("vectorize requires a program lowered to floats");
      if (std::holds_alternative<FCopy>(s))
        return {nest}; // block copies are already bulk moves; keep scalar
    }

    // Lane l addresses iv + l*step, so an access with coefficient c on the
    // target variable has lane stride c*step. The interleaved-access rewrite
    // only covers complex pairs (|stride| 2); wider strides stay scalar
    // rather than turning into un-deinterleaveable gathers.
    if (opts_.interleaved_opt) {
      for (const Stmt &s : nest.body) {
        int64_t stride = 0;
        if (const auto *ld = std::get_if<FLoad>(&s))
          stride = ld->idx.coeff_of(target.var) * target.step;
        else if (const auto *st = std::get_if<FStore>(&s))
          stride = st->idx.coeff_of(target.var) * target.step;
        if (std::abs(stride) > 2)
          return {nest};
      }
    }

    const int64_t trip = loop_trip_count(target);
    const int64_t main_trips = trip - trip % opts_.width;
    std::vector<LoopNest> out;
    if (main_trips == 0)
      return {nest};

    LoopNest main = nest;
    main.loops[loop_idx].upper = target.lower + main_trips * target.step;
    main.loops[loop_idx].step = target.step * opts_.width;
    main.loops[loop_idx].vec = VecInfo{opts_.width, opts_.position, target.step};
    vectorize_body(main, target);
    out.push_back(std::move(main));

    if (main_trips < trip) {
      LoopNest tail = nest; // scalar epilogue
      tail.loops[loop_idx].lower = target.lower + main_trips * target.step;
      out.push_back(std::move(tail));
    }
    return out;
  }

private:
  void vectorize_body(LoopNest &nest, const Loop &target) {
    std::vector<Stmt> body;
    body.reserve(nest.body.size());
    for (const Stmt &s : nest.body) {
      if (const auto *ld = std::get_if<FLoad>(&s)) {
        body.push_back(VLoad{ld->dst, ld->buf, ld->idx,
                             ld->idx.coeff_of(target.var) * target.step});
      } else if (const auto *st = std::get_if<FStore>(&s)) {
        body.push_back(VStore{st->src, st->buf, st->idx,
                              st->idx.coeff_of(target.var) * target.step});
      } else {
        body.push_back(s);
      }
    }
    if (opts_.interleaved_opt) {
      body = deinterleave_loads(std::move(body), nest);
      body = deinterleave_stores(std::move(body), nest);
    }
    nest.body = std::move(body);
  }

  static AffineExpr pair_base(const AffineExpr &idx) {
    AffineExpr base = idx;
    base.constant -= base.constant & 1;
    return base;
  }

  // Two stride-2 loads at 2e and 2e+1 cover the 2W consecutive floats
  // [2e, 2e+2W); replace them with two unit loads and even/odd shuffles.
  std::vector<Stmt> deinterleave_loads(std::vector<Stmt> body, LoopNest &nest) {
    const int64_t w = opts_.width;
    std::vector<Stmt> out;
    for (size_t i = 0; i < body.size(); ++i) {
      const auto *ld = std::get_if<VLoad>(&body[i]);
      if (!ld || ld->lane_stride != 2) {
        out.push_back(std::move(body[i]));
        continue;
      }
      // Find the matching odd/even partner later in the body.
      const AffineExpr base = pair_base(ld->idx);
      size_t partner = body.size();
      for (size_t j = i + 1; j < body.size(); ++j) {
        const auto *cand = std::get_if<VLoad>(&body[j]);
        if (cand && cand->lane_stride == 2 && cand->buf == ld->buf &&
            pair_base(cand->idx) == base &&
            (cand->idx.constant & 1) != (ld->idx.constant & 1)) {
          partner = j;
          break;
        }
      }
      if (partner == body.size()) {
        out.push_back(std::move(body[i])); // unpaired; keep the gather
        continue;
      }
      const auto &odd_ld = std::get<VLoad>(body[partner]);
      const int32_t even_dst = (ld->idx.constant & 1) == 0 ? ld->dst : odd_ld.dst;
      const int32_t odd_dst = (ld->idx.constant & 1) == 0 ? odd_ld.dst : ld->dst;
      const int32_t t0 = nest.num_regs++;
      const int32_t t1 = nest.num_regs++;
      out.push_back(VLoad{t0, ld->buf, base, 1});
      out.push_back(VLoad{t1, ld->buf, base + w, 1});
      std::vector<int32_t> even_pat, odd_pat;
      for (int64_t l = 0; l < w; ++l) {
        even_pat.push_back(static_cast<int32_t>(2 * l));
        odd_pat.push_back(static_cast<int32_t>(2 * l + 1));
      }
      out.push_back(VShuffle{even_dst, t0, t1, even_pat});
      out.push_back(VShuffle{odd_dst, t0, t1, odd_pat});
      body.erase(body.begin() + partner);
    }
    return out;
  }

  // Mirror image for stores: shuffle re/im registers back into two
  // contiguous vectors and store them unit-stride.
  std::vector<Stmt> deinterleave_stores(std::vector<Stmt> body, LoopNest &nest) {
    const int64_t w = opts_.width;
    std::vector<Stmt> out;
    for (size_t i = 0; i < body.size(); ++i) {
      const auto *st = std::get_if<VStore>(&body[i]);
      if (!st || st->lane_stride != 2 || st->src.kind != Operand::Reg) {
        out.push_back(std::move(body[i]));
        continue;
      }
      const AffineExpr base = pair_base(st->idx);
      size_t partner = body.size();
      for (size_t j = i + 1; j < body.size(); ++j) {
        const auto *cand = std::get_if<VStore>(&body[j]);
        if (cand && cand->lane_stride == 2 && cand->buf == st->buf &&
            cand->src.kind == Operand::Reg && pair_base(cand->idx) == base &&
            (cand->idx.constant & 1) != (st->idx.constant & 1)) {
          partner = j;
          break;
        }
      }
      if (partner == body.size()) {
        out.push_back(std::move(body[i]));
        continue;
      }
      const auto &other = std::get<VStore>(body[partner]);
      const int32_t re_reg =
          (st->idx.constant & 1) == 0 ? st->src.reg : other.src.reg;
      const int32_t im_reg =
          (st->idx.constant & 1) == 0 ? other.src.reg : st->src.reg;
      const int32_t s0 = nest.num_regs++;
      const int32_t s1 = nest.num_regs++;
      std::vector<int32_t> lo_pat, hi_pat;
      for (int64_t t = 0; t < w / 2; ++t) {
        lo_pat.push_back(static_cast<int32_t>(t));
        lo_pat.push_back(static_cast<int32_t>(w + t));
        hi_pat.push_back(static_cast<int32_t>(w / 2 + t));
        hi_pat.push_back(static_cast<int32_t>(w + w / 2 + t));
      }
      out.push_back(VShuffle{s0, re_reg, im_reg, lo_pat});
      out.push_back(VShuffle{s1, re_reg, im_reg, hi_pat});
      out.push_back(VStore{Operand::r(s0), st->buf, base, 1});
      out.push_back(VStore{Operand::r(s1), st->buf, base + w, 1});
      body.erase(body.begin() + partner);
    }
    return out;
  }

  const VectorizeOptions &opts_;
};

} // namespace

LoopProgram vectorize(const LoopProgram &prog, const VectorizeOptions &opts) {
  if (!is_pow2(opts.width))
    throw LowerError("vector width must be a power of two, got " +
                     std::to_string(opts.width));
  if (opts.width > 64)
    throw LowerError("vector width capped at 64 lanes");
  LoopProgram out = prog;
  out.nests.clear();
  Vectorizer v(opts);
  for (const LoopNest &nest : prog.nests)
    for (LoopNest &result : v.run(nest))
      out.nests.push_back(std::move(result));
  return out;
}

} // namespace fftgen
