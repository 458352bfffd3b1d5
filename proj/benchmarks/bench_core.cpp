#include <benchmark/benchmark.h>

#include "sigopt/contact.hpp"
#include "sigopt/fem.hpp"
#include "sigopt/loads.hpp"
#include "sigopt/mesh.hpp"
#include "sigopt/shape.hpp"

using namespace sigopt;

namespace {

const ElasticityParams kParams{0.3846, 0.5769};

void bm_assemble_stiffness(benchmark::State& state) {
  const Mesh2D disk =
      generate_disk_mesh(static_cast<int>(state.range(0)), 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(assemble_stiffness(disk, kParams));
  state.SetItemsProcessed(state.iterations() * disk.num_triangles());
}
BENCHMARK(bm_assemble_stiffness)->Arg(48)->Arg(96)->Arg(192);

void bm_dirichlet_neumann_solve(benchmark::State& state) {
  const Mesh2D disk =
      generate_disk_mesh(static_cast<int>(state.range(0)), 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        solve_dirichlet_neumann(disk, kParams, disk_load(), 1e-10));
}
BENCHMARK(bm_dirichlet_neumann_solve)->Arg(48)->Arg(96);

void bm_signorini_nitsche(benchmark::State& state) {
  const Mesh2D disk =
      generate_disk_mesh(static_cast<int>(state.range(0)), 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        solve_signorini_nitsche(disk, kParams, disk_load(), 0.0, 1e-8));
}
BENCHMARK(bm_signorini_nitsche)->Arg(48)->Arg(96);

void bm_signorini_uzawa(benchmark::State& state) {
  const Mesh2D disk =
      generate_disk_mesh(static_cast<int>(state.range(0)), 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        solve_signorini_uzawa(disk, kParams, disk_load(), 0.0, 1e-8));
}
BENCHMARK(bm_signorini_uzawa)->Arg(48)->Arg(96);

void bm_shape_gradient_boundary(benchmark::State& state) {
  const Mesh2D disk =
      generate_disk_mesh(static_cast<int>(state.range(0)), 2);
  const VectorFieldP1 u0 =
      solve_signorini_uzawa(disk, kParams, disk_load(), 0.0, 1e-10).u;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        shape_gradient_boundary(disk, kParams, disk_load(), u0));
}
BENCHMARK(bm_shape_gradient_boundary)->Arg(96);

}  // namespace

BENCHMARK_MAIN();
