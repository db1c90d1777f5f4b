# tests/test_kernels.py
import numpy as np
import pytest

from benchmarks import cg, ep, ft, is_sort, mg
from common.params import class_params
from runtime.pool import WorkerPool, WorkerPoolConfig


def run_with(module, benchmark, workers, tag='S'):
    with WorkerPool(WorkerPoolConfig(workers=workers)) as pool:
        return module.run(class_params(benchmark, tag), pool, timers_enabled=True)


class TestEP:

    def test_chunk_tally_is_schedule_independent(self, pool, serial_pool):
        """The same chunk range folds to identical tallies on 1 and 4 workers"""
        def tally(p):
            return p.par_map_reduce(range(8), lambda k: ep.generate_chunk(k, 1024),
                                    ep.GaussianTally(), ep.GaussianTally.merge)

        one, four = tally(serial_pool), tally(pool)
        assert one.q == four.q
        assert one.sx == pytest.approx(four.sx, rel=1e-13)
        assert one.pair_count > 0

    def test_empty_chunk(self):
        """A chunk of zero pairs contributes nothing"""
        assert ep.generate_chunk(3, 0) == ep.GaussianTally()

    def test_annulus_counts_respect_acceptance_rate(self):
        """About pi/4 of the pairs fall inside the unit disk"""
        t = ep.generate_chunk(0, 4096)
        assert 0.75 < t.pair_count / 4096 < 0.82

    @pytest.mark.slow
    @pytest.mark.parametrize('workers', [1, 4])
    def test_class_s_verifies(self, workers):
        """Class S sums and annulus counts match the reference"""
        result = run_with(ep, 'ep', workers)
        assert result.verified
        assert result.details['q'] == list(class_params('ep', 'S').reference['q'])
        assert 'gaussian' in result.timers


class TestCG:

    def test_matrix_is_valid_csr(self, serial_pool):
        """makea produces well-formed, symmetric-pattern CSR data"""
        params = class_params('cg', 'S')
        matrix = cg.makea(params, cg.initial_stream())
        assert matrix.n == params.dims[0]
        assert matrix.check() == []

    def test_inner_solve_reduces_residual(self, pool):
        """25 CG steps leave |x - A z| below the starting norm |x|"""
        params = class_params('cg', 'S')
        matrix = cg.makea(params, cg.initial_stream())
        state = cg.CGState.ones(matrix.n)
        vectors = cg._Vectors(pool, matrix.n)
        rnorm = cg.conj_grad(matrix, state, vectors)
        assert rnorm < np.sqrt(matrix.n)

    def test_diagonal_system_solves_in_two_steps(self, serial_pool):
        """diag(2, 3) z = (1, 1) gives z = (1/2, 1/3)"""
        matrix = cg.SparseMatrixCSR(rowstr=np.array([0, 1, 2], dtype=np.int64),
                                    colidx=np.array([0, 1], dtype=np.int64),
                                    values=np.array([2.0, 3.0]))
        state = cg.CGState.ones(2)
        rnorm = cg.conj_grad(matrix, state, cg._Vectors(serial_pool, 2), iterations=2)
        assert state.z == pytest.approx([0.5, 1.0 / 3.0], abs=1e-12)
        assert rnorm < 1e-12

    def test_outer_iteration_normalizes_x(self, pool):
        params = class_params('cg', 'S')
        matrix = cg.makea(params, cg.initial_stream())
        state = cg.CGState.ones(matrix.n)
        cg.outer_iteration(matrix, state, cg._Vectors(pool, matrix.n), float(params.extra['shift']))
        assert np.linalg.norm(state.x) == pytest.approx(1.0, abs=1e-12)

    def test_zeta_approaches_reference(self, pool):
        """The distance to the class S zeta shrinks over the outer iterations"""
        params = class_params('cg', 'S')
        matrix = cg.makea(params, cg.initial_stream())
        state = cg.CGState.ones(matrix.n)
        history = []
        cg.outer_loop(matrix, state, cg._Vectors(pool, matrix.n), params.niter,
                      float(params.extra['shift']), history)
        errors = [abs(zeta - params.reference['zeta']) for _, zeta in history]
        assert len(errors) == params.niter
        assert errors[-1] < errors[1]
        assert errors[-1] < 1e-10 * abs(params.reference['zeta'])

    @pytest.mark.slow
    def test_class_s_verifies_and_agrees_across_workers(self):
        """zeta matches the reference on 1 and 4 workers"""
        one = run_with(cg, 'cg', 1)
        four = run_with(cg, 'cg', 4)
        assert one.verified and four.verified
        assert one.details['zeta'] == pytest.approx(four.details['zeta'], rel=1e-10)


def naive_dft3(x: np.ndarray, sign: int) -> np.ndarray:
    """Separable O(N^2)-per-axis DFT with kernel exp(sign * 2 pi i jk / n)"""
    out = x.astype(np.complex128)
    for axis in range(3):
        n = out.shape[axis]
        idx = np.arange(n)
        matrix = np.exp(sign * 2j * np.pi * np.outer(idx, idx) / n)
        out = np.moveaxis(np.tensordot(matrix, np.moveaxis(out, axis, 0), axes=(1, 0)), 0, axis)
    return out


class TestFT:

    @pytest.fixture
    def grid(self):
        rng = np.random.default_rng(11)
        return rng.standard_normal((8, 8, 8)) + 1j * rng.standard_normal((8, 8, 8))

    def test_forward_matches_naive_dft(self, grid, pool):
        """The 3-D transform equals a direct DFT within 1e-10"""
        out = grid.copy()
        ft.fft3d(out, ft.FORWARD, pool)
        assert np.max(np.abs(out - naive_dft3(grid, ft.FORWARD))) < 1e-10

    def test_forward_inverse_identity(self, grid, pool):
        """inverse(forward(x)) / N recovers x within 1e-12"""
        out = grid.copy()
        ft.fft3d(out, ft.FORWARD, pool)
        ft.fft3d(out, ft.INVERSE, pool)
        assert np.max(np.abs(out / grid.size - grid)) < 1e-12

    def test_parseval(self, grid, serial_pool):
        """Energy is preserved up to the factor N"""
        out = grid.copy()
        ft.fft3d(out, ft.FORWARD, serial_pool)
        energy = np.sum(np.abs(grid) ** 2)
        assert np.sum(np.abs(out) ** 2) / grid.size == pytest.approx(energy, rel=1e-10)

    def test_non_cubic_grid(self, pool):
        """Axes of different lengths transform independently"""
        rng = np.random.default_rng(3)
        x = rng.standard_normal((4, 16, 8)) + 0j
        out = x.copy()
        ft.fft3d(out, ft.FORWARD, pool)
        assert np.max(np.abs(out - naive_dft3(x, ft.FORWARD))) < 1e-10

    def test_transform_is_linear(self, grid, pool):
        other = np.conj(grid[::-1]).copy()
        combined = 2.0 * grid - 0.5j * other
        ft.fft3d(combined, ft.FORWARD, pool)
        fg, fo = grid.copy(), other.copy()
        ft.fft3d(fg, ft.FORWARD, pool)
        ft.fft3d(fo, ft.FORWARD, pool)
        assert np.max(np.abs(combined - (2.0 * fg - 0.5j * fo))) < 1e-10

    def test_evolve_exponents_add(self, grid, pool):
        """Evolving by 2 then by 3 steps equals evolving by 5"""
        table = ft.ExponentTable.build(8, 8, 8, alpha=1e-2)
        once, twice, direct = (np.zeros_like(grid) for _ in range(3))
        ft.evolve(grid, once, 2, table, pool)
        ft.evolve(once, twice, 3, table, pool)
        ft.evolve(grid, direct, 5, table, pool)
        assert np.allclose(twice, direct, rtol=1e-12, atol=0.0)
        assert not np.allclose(direct, grid)

    def test_checksum_of_zero_grid(self, pool):
        assert ft.checksum(np.zeros((8, 8, 8), dtype=np.complex128), pool) == 0j

    def test_invalid_dimension(self, serial_pool):
        """Only axes 1, 2 and 3 exist"""
        with pytest.raises(ValueError):
            ft.fft_dim(np.zeros((2, 2, 2), dtype=complex), 4, ft.FORWARD, serial_pool)

    def test_initial_conditions_independent_of_workers(self, pool, serial_pool):
        """Per-plane seed jumps give the same field on 1 and 4 workers"""
        a = np.zeros((4, 8, 8), dtype=np.complex128)
        b = np.zeros_like(a)
        ft.compute_initial_conditions(a, serial_pool)
        ft.compute_initial_conditions(b, pool)
        assert np.array_equal(a, b)

    @pytest.mark.slow
    def test_class_s_verifies(self):
        """Six checksums match the reference within 1e-12"""
        result = run_with(ft, 'ft', 4)
        assert result.verified
        assert len(result.details['checksums']) == 6


class TestIS:

    def test_ranking_matches_comparison_sort(self, pool):
        """Keys rebuilt from the ranks equal numpy's sort with no inversions"""
        keys = is_sort.create_seq(2 ** 16, 2 ** 11, pool)
        state = is_sort.RankState(keys.copy(), 11, 9)
        is_sort.rank_keys(state, pool)
        assert is_sort.full_verify(state, pool) == 0
        assert np.array_equal(state.keys, np.sort(keys))

    def test_rank_of_counts_smaller_keys(self, serial_pool):
        """rank_of(k) is the number of keys below k"""
        keys = np.array([5, 1, 3, 3, 0, 7, 2, 6], dtype=np.int64)
        state = is_sort.RankState(keys.copy(), 3, 1)
        is_sort.rank_keys(state, serial_pool)
        for k in range(1, 8):
            assert state.rank_of(k) == int(np.sum(keys < k))

    def test_full_verify_of_reversed_keys(self, pool):
        """Ten keys in descending order come back ascending"""
        state = is_sort.RankState(np.arange(10, dtype=np.int64)[::-1].copy(), 4, 2)
        is_sort.rank_keys(state, pool)
        assert is_sort.full_verify(state, pool) == 0
        assert np.array_equal(state.keys, np.arange(10))

    def test_keys_identical_across_workers(self, pool, serial_pool):
        """Key generation does not depend on the partitioning"""
        assert np.array_equal(is_sort.create_seq(5000, 2 ** 11, pool),
                              is_sort.create_seq(5000, 2 ** 11, serial_pool))

    def test_too_many_buckets_rejected(self):
        """Buckets cannot outnumber key values"""
        with pytest.raises(ValueError):
            is_sort.RankState(np.zeros(4, dtype=np.int64), 2, 3)

    @pytest.mark.slow
    @pytest.mark.parametrize('workers', [1, 4])
    def test_class_s_verifies(self, workers):
        """All partial checks and the full verification pass"""
        result = run_with(is_sort, 'is', workers)
        assert result.verified
        assert result.details['inversions'] == 0


class TestMG:

    def test_restriction_of_constant_field(self, pool):
        """Full weighting maps a constant to four times the constant"""
        grid = mg.HierarchicalGrid.allocate(3)
        grid.level(3).view()[:] = 1.0
        mg.rprj3(pool, grid.level(3), grid.level(2))
        assert np.allclose(grid.level(2).view()[1:-1, 1:-1, 1:-1], 4.0)

    def test_comm3_makes_ghosts_periodic(self, serial_pool):
        """Ghost layers copy the opposite interior faces"""
        grid = mg.HierarchicalGrid.allocate(2)
        level = grid.level(2)
        view = level.view()
        view[1:-1, 1:-1, 1:-1] = np.random.default_rng(0).standard_normal((4, 4, 4))
        mg.comm3(serial_pool, level)
        assert np.array_equal(view[0, 1:-1, 1:-1], view[-2, 1:-1, 1:-1])
        assert np.array_equal(view[1:-1, 1:-1, 0], view[1:-1, 1:-1, -2])
        assert np.array_equal(view[1:-1, -1, 1:-1], view[1:-1, 1, 1:-1])

    @pytest.fixture
    def coefficients(self):
        params = class_params('mg', 'S')
        return params.extra['a'], params.extra['c']

    @staticmethod
    def random_level(pool, lt=3, seed=0):
        grid = mg.HierarchicalGrid.allocate(lt, lowest=lt)
        level = grid.level(lt)
        n = 1 << lt
        level.view()[1:-1, 1:-1, 1:-1] = np.random.default_rng(seed).standard_normal((n, n, n))
        mg.comm3(pool, level)
        return level

    def test_comm3_is_idempotent(self, pool):
        level = self.random_level(pool)
        once = level.view().copy()
        mg.comm3(pool, level)
        assert np.array_equal(level.view(), once)

    def test_resid_of_zero_u_is_v(self, pool, coefficients):
        a, _ = coefficients
        v = self.random_level(pool)
        u = mg.HierarchicalGrid.allocate(3, lowest=3).level(3)
        r = mg.HierarchicalGrid.allocate(3, lowest=3).level(3)
        mg.resid(pool, u, v, r, a)
        assert np.array_equal(r.view(), v.view())

    def test_psinv_of_zero_r_keeps_u(self, pool, coefficients):
        _, c = coefficients
        u = self.random_level(pool, seed=5)
        before = u.view().copy()
        r = mg.HierarchicalGrid.allocate(3, lowest=3).level(3)
        mg.psinv(pool, r, u, c)
        assert np.array_equal(u.view(), before)

    def test_interp_of_zero_adds_nothing(self, pool):
        grid = mg.HierarchicalGrid.allocate(3, lowest=2)
        fine = grid.level(3)
        fine.view()[:] = 0.25
        mg.interp(pool, grid.level(2), fine)
        assert np.all(fine.view() == 0.25)

    def test_interp_of_constant_is_constant(self, pool):
        """Trilinear weights reproduce a constant on every fine interior point"""
        grid = mg.HierarchicalGrid.allocate(3, lowest=2)
        grid.level(2).view()[:] = 1.0
        mg.interp(pool, grid.level(2), grid.level(3))
        assert np.all(grid.level(3).view()[1:-1, 1:-1, 1:-1] == 1.0)

    def test_norm2u3_zero_and_spike(self, pool):
        grid = mg.HierarchicalGrid.allocate(3, lowest=3)
        level = grid.level(3)
        assert mg.norm2u3(pool, level) == (0.0, 0.0)
        level.view()[4, 2, 7] = -3.0
        rnm2, rnmu = mg.norm2u3(pool, level)
        assert rnm2 == pytest.approx(3.0 / np.sqrt(512.0), rel=1e-14)
        assert rnmu == 3.0

    def test_zran3_places_twenty_charges(self, pool):
        """Ten +1 and ten -1 points, zero elsewhere"""
        grid = mg.HierarchicalGrid.allocate(4, lowest=4)
        mg.zran3(pool, grid.level(4))
        interior = grid.level(4).view()[1:-1, 1:-1, 1:-1]
        assert np.sum(interior == 1.0) == 10
        assert np.sum(interior == -1.0) == 10
        assert np.sum(interior != 0.0) == 20

    def test_residual_decreases_over_v_cycles(self, pool):
        """The class S residual norm strictly decreases over four V-cycles"""
        params = class_params('mg', 'S')
        a, c = params.extra['a'], params.extra['c']
        problem = mg.MultigridProblem.for_class(params)
        lt = problem.lt
        v = problem.v.level(lt)
        problem.reset(pool)
        mg.resid(pool, problem.u.level(lt), v, problem.r.level(lt), a)
        norms = [mg.norm2u3(pool, problem.r.level(lt))[0]]
        for _ in range(4):
            mg.mg3P(pool, problem.u, v, problem.r, a, c)
            mg.resid(pool, problem.u.level(lt), v, problem.r.level(lt), a)
            norms.append(mg.norm2u3(pool, problem.r.level(lt))[0])
        assert all(later < earlier for earlier, later in zip(norms, norms[1:]))

    @pytest.mark.slow
    def test_class_s_verifies(self):
        """The final residual norm matches the reference"""
        result = run_with(mg, 'mg', 4)
        assert result.verified
