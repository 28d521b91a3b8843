// Copyright 2026 The fftgen Authors
//
// Licensed under the Apache License v2.0 with LLVM Exceptions.
// See https://llvm.org/LICENSE.txt for license information.
// SPDX-License-Identifier: Apache-2.0 WITH LLVM-exception

#include "fftgen/gpumap.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "machine.hpp"

namespace fftgen {

namespace {

void collect_buffers(const Stmt &s, std::set<int32_t> &bufs) {
  if (const auto *mv = std::get_if<CMatVec>(&s)) {
    bufs.insert(mv->in.buf);
    bufs.insert(mv->out.buf);
  } else if (const auto *pm = std::get_if<CPointMul>(&s)) {
    bufs.insert(pm->coeff.buf);
    bufs.insert(pm->in.buf);
    bufs.insert(pm->out.buf);
  } else if (const auto *cp = std::get_if<CCopy>(&s)) {
    bufs.insert(cp->in.buf);
    bufs.insert(cp->out.buf);
  } else if (const auto *ld = std::get_if<FLoad>(&s)) {
    bufs.insert(ld->buf);
  } else if (const auto *st = std::get_if<FStore>(&s)) {
    bufs.insert(st->buf);
  } else if (const auto *fc = std::get_if<FCopy>(&s)) {
    bufs.insert(fc->in_buf);
    bufs.insert(fc->out_buf);
  } else if (const auto *vl = std::get_if<VLoad>(&s)) {
    bufs.insert(vl->buf);
  } else if (const auto *vs = std::get_if<VStore>(&s)) {
    bufs.insert(vs->buf);
  }
}

// Largest divisor of trip that is <= cap; trip counts here are powers of two,
// but the search keeps the grid*block product exact for any trip.
int64_t pick_block(int64_t trip, int64_t cap) {
  int64_t best = 1;
  for (int64_t d = 1; d * d <= trip; ++d) {
    if (trip % d != 0)
      continue;
    if (d <= cap)
      best = std::max(best, d);
    if (trip / d <= cap)
      best = std::max(best, trip / d);
  }
  return best;
}

} // namespace

std::vector<KernelDescriptor> extract_kernels(const LoopProgram &prog,
                                              const GpuMapOptions &opts) {
  std::vector<KernelDescriptor> kernels;
  for (const LoopNest &nest : prog.nests) {
    if (nest.loops.empty())
      continue;
    if (nest.loops.size() > 3)
      throw GpuMapError("nest depth " + std::to_string(nest.loops.size()) +
                        " exceeds the 3 hardware dimensions");
    for (const Loop &l : nest.loops)
      if (!l.parallel)
        throw GpuMapError("cannot extract a kernel from a non-parallel loop");

    KernelDescriptor k;
    k.body = nest.body;
    k.num_regs = nest.num_regs;
    k.label = nest.label;
    for (const Loop &l : nest.loops)
      if (l.vec && l.vec->width > 1)
        k.lanes = l.vec->width;

    if (nest.loops.size() == 1) {
      const Loop &l = nest.loops.front();
      const int64_t trip = loop_trip_count(l);
      const int64_t block = pick_block(trip, std::min(opts.block_size, trip));
      k.grid_dims = {trip / block};
      k.block_dims = {block};
      k.bindings.push_back(KernelBinding{l.var, l.lower, l.step, block, 0, 0});
    } else {
      const Loop &outer = nest.loops.front();
      k.grid_dims = {loop_trip_count(outer)};
      k.bindings.push_back(
          KernelBinding{outer.var, outer.lower, outer.step, 1, 0, -1});
      for (size_t i = 1; i < nest.loops.size(); ++i) {
        const Loop &l = nest.loops[i];
        k.block_dims.push_back(loop_trip_count(l));
        k.bindings.push_back(KernelBinding{l.var, l.lower, l.step, 1, -1,
                                           static_cast<int32_t>(i - 1)});
      }
    }

    std::set<int32_t> bufs;
    for (const Stmt &s : nest.body)
      collect_buffers(s, bufs);
    k.registered_buffers.assign(bufs.begin(), bufs.end());
    kernels.push_back(std::move(k));
  }
  return kernels;
}

ComplexBuffer simulate_kernels(const LoopProgram &prog,
                               const std::vector<KernelDescriptor> &kernels,
                               const ComplexBuffer &input) {
  detail::Machine machine(prog);
  machine.load_input(input);

  for (const KernelDescriptor &k : kernels) {
    std::vector<char> allowed(prog.buffers.size(), 0);
    for (int32_t b : k.registered_buffers)
      allowed[b] = 1;

    detail::Frame frame;
    frame.env.assign(prog.next_var, 0);
    frame.lanes = k.lanes;
    frame.regs.assign(static_cast<size_t>(k.num_regs) * k.lanes, 0.0);

    std::vector<int64_t> grid_idx(k.grid_dims.size(), 0);
    std::vector<int64_t> block_idx(k.block_dims.size(), 0);

    // Odometer over grid coordinates, then block coordinates within each
    // block; kernels execute back to back (full barrier in between).
    const auto bind_and_run = [&]() {
      for (const KernelBinding &b : k.bindings) {
        int64_t linear = 0;
        if (b.grid_dim >= 0 && b.block_dim >= 0)
          linear = grid_idx[b.grid_dim] * b.block_extent + block_idx[b.block_dim];
        else if (b.grid_dim >= 0)
          linear = grid_idx[b.grid_dim];
        else
          linear = block_idx[b.block_dim];
        frame.env[b.var] = b.lower + linear * b.step;
      }
      machine.exec_body(frame, k.body, &allowed);
    };

    const auto advance = [](std::vector<int64_t> &idx,
                            const std::vector<int64_t> &dims) {
      for (size_t d = dims.size(); d-- > 0;) {
        if (++idx[d] < dims[d])
          return true;
        idx[d] = 0;
      }
      return false;
    };

    do {
      std::fill(block_idx.begin(), block_idx.end(), 0);
      if (k.block_dims.empty()) {
        bind_and_run();
      } else {
        do {
          bind_and_run();
        } while (advance(block_idx, k.block_dims));
      }
    } while (advance(grid_idx, k.grid_dims));
  }
  return machine.output();
}

std::string print_kernels(const LoopProgram &prog,
                          const std::vector<KernelDescriptor> &kernels) {
  static const char *const axes[] = {"x", "y", "z"};
  std::ostringstream out;
  for (size_t i = 0; i < kernels.size(); ++i) {
    const KernelDescriptor &k = kernels[i];
    out << "kernel " << i << " (" << k.label << "): grid=[";
    for (size_t d = 0; d < k.grid_dims.size(); ++d)
      out << (d ? "," : "") << k.grid_dims[d];
    out << "] block=[";
    for (size_t d = 0; d < k.block_dims.size(); ++d)
      out << (d ? "," : "") << k.block_dims[d];
    out << "] buffers={";
    for (size_t d = 0; d < k.registered_buffers.size(); ++d)
      out << (d ? "," : "") << prog.buffers[k.registered_buffers[d]].name;
    out << "}\n";
    for (const KernelBinding &b : k.bindings) {
      out << "  i" << b.var << " = ";
      std::ostringstream linear;
      if (b.grid_dim >= 0 && b.block_dim >= 0)
        linear << "blockIdx." << axes[b.grid_dim] << "*" << b.block_extent
               << " + threadIdx." << axes[b.block_dim];
      else if (b.grid_dim >= 0)
        linear << "blockIdx." << axes[b.grid_dim];
      else
        linear << "threadIdx." << axes[b.block_dim];
      if (b.step != 1)
        out << "(" << linear.str() << ")*" << b.step;
      else
        out << linear.str();
      if (b.lower != 0)
        out << " + " << b.lower;
      out << "\n";
    }
    for (const Stmt &s : k.body)
      out << "  " << print_stmt_line(s, prog) << "\n";
  }
  return out.str();
}

} // namespace fftgen
