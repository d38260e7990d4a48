//! Coupled two-valley eigenproblem: assembly, diagonalization, extraction of
//! the splitting ε and coupling Δ, field sweeps with overlap-based level
//! tracking, anti-crossing search, and the cross-axis coupling diagnostic.
//!
//! Each axis pair of opposite valleys is solved as an independent 2N-block
//! problem; coupling between perpendicular axes is quantified by
//! [`Model::cross_axis_coupling`] instead of being carried in the
//! Hamiltonian.

use crate::dot::{
    kinetic_matrix, magnetic_matrix, oscillatory_kernel, potential_matrix, CouplingSource,
    DotError, DotSpec,
};
use crate::eigen::{eigh_lowest, EigenError, EigenSolution};
use crate::units::SiliconParams;
use crate::valley::{
    coupling_i, coupling_j_mag, valley_set, BandModel, Valley, ValleyError,
};
use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum SolverError {
    #[error(transparent)]
    Dot(#[from] DotError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    Valley(#[from] ValleyError),
    #[error("valleys {0} and {1} are not an opposite pair sharing an axis")]
    NotOppositePair(usize, usize),
    #[error("ground doublet belongs to the valley-{found} axis pair, not valleys 5/6 (single-valley ground energies: x {x:.6} eV, y {y:.6} eV, z {z:.6} eV)")]
    GroundDoubletNotZ { found: usize, x: f64, y: f64, z: f64 },
    #[error("field grid must be strictly increasing with at least 2 points")]
    BadFieldGrid,
    #[error("requested tracked level {0} but only {1} levels were computed")]
    LevelOutOfRange(usize, usize),
}

/// Full model bundle: material parameters, band model, basis resolution and
/// the coupling-source mode.
#[derive(Debug, Clone)]
pub struct Model {
    pub silicon: SiliconParams,
    pub band: BandModel,
    pub basis_modes: [usize; 3],
    pub coupling_source: CouplingSource,
}

impl Default for Model {
    fn default() -> Self {
        Model {
            silicon: SiliconParams::default(),
            band: BandModel::default(),
            basis_modes: [8, 10, 12],
            coupling_source: CouplingSource::Full,
        }
    }
}

/// Coupled two-valley Hamiltonian with block structure
/// [[H_l, H_ll′], [H_ll′†, H_l′]].
#[derive(Debug, Clone)]
pub struct CoupledHamiltonian {
    /// Valley indices (1-based), an opposite pair.
    pub pair: (usize, usize),
    pub block_dim: usize,
    pub matrix: Array2<Complex64>,
}

impl CoupledHamiltonian {
    /// Max element defect |H − H†| relative to the Frobenius norm.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.matrix.nrows();
        let norm: f64 = self
            .matrix
            .iter()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst / norm.max(1e-300)
    }
}

/// Parity label of a coupled eigenstate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Symmetric,
    Antisymmetric,
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Parity::Symmetric => f.write_str("S"),
            Parity::Antisymmetric => f.write_str("A"),
        }
    }
}

/// One field point of a tracked sweep.
#[derive(Debug, Clone)]
pub struct SpectrumPoint {
    pub field_kv_cm: f64,
    /// Energies in ascending order, eV.
    pub energies: Vec<f64>,
    pub parities: Vec<Parity>,
    /// tracked_ids[i] is the persistent id of the i-th (energy-ordered) level.
    pub tracked_ids: Vec<usize>,
    pub residuals: Vec<f64>,
    pub warnings: Vec<String>,
}

/// Tracked eigenpairs over a field sweep.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub pair: (usize, usize),
    pub points: Vec<SpectrumPoint>,
}

/// ε/Δ extraction result at one field.
#[derive(Debug, Clone, Copy)]
pub struct SplittingResult {
    /// Coupled-problem splitting E_A − E_S of the lowest doublet, eV.
    pub eps_ev: f64,
    /// |⟨F_5|H_56|F_6⟩| over the uncoupled ground envelopes, eV.
    pub delta_ev: f64,
    /// Single-valley ground energy, eV.
    pub ground_ev: f64,
    pub residual_max: f64,
}

/// Cross-axis coupling diagnostic.
#[derive(Debug, Clone, Copy)]
pub struct CrossAxisResult {
    /// |⟨F_1|H_15|F_5⟩|, eV.
    pub numerator_ev: f64,
    /// |⟨F_5|H_56|F_6⟩|, eV.
    pub denominator_ev: f64,
    pub ratio: f64,
}

/// Result of the gap search over a swept parameter.
#[derive(Debug, Clone)]
pub struct GapSearch {
    pub f_star: f64,
    pub gap: f64,
    /// Every (F, gap) evaluation in call order.
    pub trace: Vec<(f64, f64)>,
    /// True when the minimum is interior to the search range.
    pub interior: bool,
}

/// Coarse-scan plus golden-section minimization of a positive gap function.
/// Returns a non-interior result (not an error) when the scan minimum sits on
/// a range boundary.
pub fn minimize_gap<E>(
    mut eval: impl FnMut(f64) -> Result<f64, E>,
    f_lo: f64,
    f_hi: f64,
    coarse: usize,
    tol_f: f64,
) -> Result<GapSearch, E> {
    let coarse = coarse.max(5);
    let mut trace = Vec::new();
    let mut gaps = Vec::with_capacity(coarse);
    for i in 0..coarse {
        let f = f_lo + (f_hi - f_lo) * i as f64 / (coarse - 1) as f64;
        let g = eval(f)?;
        trace.push((f, g));
        gaps.push((f, g));
    }
    let (imin, _) = gaps
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.partial_cmp(&b.1 .1).unwrap())
        .unwrap();
    if imin == 0 || imin == coarse - 1 {
        let (f, g) = gaps[imin];
        return Ok(GapSearch {
            f_star: f,
            gap: g,
            trace,
            interior: false,
        });
    }
    let mut a = gaps[imin - 1].0;
    let mut b = gaps[imin + 1].0;
    let inv_phi = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut g1 = eval(x1)?;
    trace.push((x1, g1));
    let mut g2 = eval(x2)?;
    trace.push((x2, g2));
    while (b - a) > tol_f {
        if g1 <= g2 {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - inv_phi * (b - a);
            g1 = eval(x1)?;
            trace.push((x1, g1));
        } else {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + inv_phi * (b - a);
            g2 = eval(x2)?;
            trace.push((x2, g2));
        }
    }
    let (f_star, gap) = if g1 <= g2 { (x1, g1) } else { (x2, g2) };
    Ok(GapSearch {
        f_star,
        gap,
        trace,
        interior: true,
    })
}

fn parity_of(vector: &Array1<Complex64>, block_dim: usize) -> Parity {
    let mut dot = Complex64::new(0.0, 0.0);
    for i in 0..block_dim {
        dot += vector[i].conj() * vector[block_dim + i];
    }
    if dot.re >= 0.0 {
        Parity::Symmetric
    } else {
        Parity::Antisymmetric
    }
}

impl Model {
    pub fn valleys(&self) -> [Valley; 6] {
        valley_set(self.silicon.m_l, self.silicon.m_t, &self.band)
    }

    /// H_l = kinetic + magnetic + potential for one valley, complex Hermitian.
    pub fn single_valley_hamiltonian(
        &self,
        valley: &Valley,
        spec: &DotSpec,
    ) -> Array2<Complex64> {
        let basis = spec.basis(self.basis_modes);
        let n = basis.len();
        let kin = kinetic_matrix(valley, &basis);
        let pot = potential_matrix(spec, &basis);
        let mag = magnetic_matrix(spec.b_tesla, valley, spec, &basis);
        let mut h = Array2::<Complex64>::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                h[(i, j)] = Complex64::new(kin[(i, j)] + pot[(i, j)], 0.0) + mag[(i, j)];
            }
        }
        h
    }

    /// Off-diagonal inter-valley block H_ll′ for any valley pair (1-based
    /// indices). Works for opposite and perpendicular pairs alike.
    pub fn coupling_block(
        &self,
        l: usize,
        lp: usize,
        spec: &DotSpec,
    ) -> Result<Array2<Complex64>, SolverError> {
        let valleys = self.valleys();
        let vl = &valleys[l - 1];
        let vlp = &valleys[lp - 1];
        let q = [
            vl.k_min[0] - vlp.k_min[0],
            vl.k_min[1] - vlp.k_min[1],
            vl.k_min[2] - vlp.k_min[2],
        ];
        let basis = spec.basis(self.basis_modes);
        let kern = oscillatory_kernel(
            q,
            self.band.k_min_mag(),
            vl.axis_index(),
            vlp.axis_index(),
            spec,
            &basis,
            self.coupling_source,
        )?;
        let i_const = coupling_i(&self.band, vl, vlp)?;
        let j_mag = coupling_j_mag(&self.band, vl, vlp)?;
        let n = basis.len();
        let mut block = Array2::<Complex64>::zeros((n, n));
        let minus_i = Complex64::new(0.0, -1.0);
        for r in 0..n {
            for c in 0..n {
                block[(r, c)] = i_const * kern.m_v[(r, c)]
                    + minus_i * j_mag * kern.m_grad_left[(r, c)]
                    + minus_i * j_mag * kern.m_grad_right[(r, c)];
            }
        }
        Ok(block)
    }

    /// Assembles the coupled Hamiltonian for an opposite valley pair.
    pub fn assemble(
        &self,
        pair: (usize, usize),
        spec: &DotSpec,
    ) -> Result<CoupledHamiltonian, SolverError> {
        let (l, lp) = pair;
        let opposite = matches!(pair, (1, 2) | (2, 1) | (3, 4) | (4, 3) | (5, 6) | (6, 5));
        if !opposite {
            return Err(SolverError::NotOppositePair(l, lp));
        }
        let valleys = self.valleys();
        let h_l = self.single_valley_hamiltonian(&valleys[l - 1], spec);
        let h_lp = self.single_valley_hamiltonian(&valleys[lp - 1], spec);
        let block = self.coupling_block(l, lp, spec)?;
        let n = h_l.nrows();
        let mut m = Array2::<Complex64>::zeros((2 * n, 2 * n));
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = h_l[(i, j)];
                m[(n + i, n + j)] = h_lp[(i, j)];
                m[(i, n + j)] = block[(i, j)];
                m[(n + j, i)] = block[(i, j)].conj();
            }
        }
        Ok(CoupledHamiltonian {
            pair,
            block_dim: n,
            matrix: m,
        })
    }

    /// Lowest-k eigenpairs of a coupled Hamiltonian.
    pub fn eigensolve(
        &self,
        h: &CoupledHamiltonian,
        k: usize,
    ) -> Result<EigenSolution, SolverError> {
        Ok(eigh_lowest(&h.matrix, k)?)
    }

    /// Single-valley ground energies per axis (valleys 1, 3, 5), eV.
    fn axis_ground_energies(&self, spec: &DotSpec) -> Result<[f64; 3], SolverError> {
        let valleys = self.valleys();
        let mut out = [0.0; 3];
        for (slot, idx) in [(0usize, 0usize), (1, 2), (2, 4)] {
            let h = self.single_valley_hamiltonian(&valleys[idx], spec);
            let sol = eigh_lowest(&h, 1)?;
            out[slot] = sol.values[0];
        }
        Ok(out)
    }

    /// ε (coupled doublet splitting) and Δ (perturbative coupling element)
    /// for the z-valley pair at the dot's configured field.
    pub fn splitting_and_coupling(&self, spec: &DotSpec) -> Result<SplittingResult, SolverError> {
        let [ex, ey, ez] = self.axis_ground_energies(spec)?;
        if !(ez < ex && ez < ey) {
            let found = if ex < ey { 1 } else { 3 };
            return Err(SolverError::GroundDoubletNotZ {
                found,
                x: ex,
                y: ey,
                z: ez,
            });
        }
        let valleys = self.valleys();
        let h5 = self.single_valley_hamiltonian(&valleys[4], spec);
        let ground = eigh_lowest(&h5, 1)?;
        let block = self.coupling_block(5, 6, spec)?;
        let n = block.nrows();
        // Δ = |⟨g|H_56|g⟩| with identical uncoupled envelopes for valleys 5, 6
        let mut delta = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let mut row = Complex64::new(0.0, 0.0);
            for j in 0..n {
                row += block[(i, j)] * ground.vectors[(j, 0)];
            }
            delta += ground.vectors[(i, 0)].conj() * row;
        }
        let coupled = self.assemble((5, 6), spec)?;
        let sol = self.eigensolve(&coupled, 2)?;
        Ok(SplittingResult {
            eps_ev: sol.values[1] - sol.values[0],
            delta_ev: delta.norm(),
            ground_ev: ground.values[0],
            residual_max: sol
                .residuals
                .iter()
                .cloned()
                .fold(0.0, f64::max)
                .max(ground.residuals[0]),
        })
    }

    /// Tracked eigenpairs of the z-valley coupled problem over a field grid.
    /// Points are computed in parallel and merged in grid order; tracking is
    /// a sequential maximum-overlap pass.
    pub fn sweep_field(
        &self,
        spec_template: &DotSpec,
        grid: &[f64],
        levels: usize,
    ) -> Result<Spectrum, SolverError> {
        if grid.len() < 2 || grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(SolverError::BadFieldGrid);
        }
        let solutions: Vec<Result<(f64, EigenSolution, usize), SolverError>> = grid
            .par_iter()
            .map(|&f| {
                let mut spec = spec_template.clone();
                spec.field_kv_cm = f;
                let h = self.assemble((5, 6), &spec)?;
                let sol = self.eigensolve(&h, levels)?;
                Ok((f, sol, h.block_dim))
            })
            .collect();
        let mut points = Vec::with_capacity(grid.len());
        let mut prev: Option<(Vec<usize>, EigenSolution)> = None;
        for res in solutions {
            let (f, sol, block_dim) = res?;
            let parities: Vec<Parity> = (0..levels)
                .map(|c| {
                    let col = sol.vectors.column(c).to_owned();
                    parity_of(&col, block_dim)
                })
                .collect();
            let mut warnings = Vec::new();
            let tracked_ids = match &prev {
                None => (0..levels).collect::<Vec<_>>(),
                Some((prev_ids, prev_sol)) => {
                    assign_by_overlap(prev_ids, prev_sol, &sol, &mut warnings)
                }
            };
            points.push(SpectrumPoint {
                field_kv_cm: f,
                energies: sol.values.clone(),
                parities,
                tracked_ids: tracked_ids.clone(),
                residuals: sol.residuals.clone(),
                warnings,
            });
            prev = Some((tracked_ids, sol));
        }
        Ok(Spectrum {
            pair: (5, 6),
            points,
        })
    }

    /// Locates the avoided crossing between two tracked doublet levels
    /// (single-valley labels: doublet d covers coupled levels 2d, 2d+1).
    /// The search follows the symmetric branch of each doublet.
    pub fn find_anticrossing(
        &self,
        spec_template: &DotSpec,
        doublet_a: usize,
        doublet_b: usize,
        f_lo: f64,
        f_hi: f64,
        coarse: usize,
        tol_f: f64,
    ) -> Result<GapSearch, SolverError> {
        let hi = doublet_a.max(doublet_b);
        let levels = 2 * hi + 2;
        // reference states, re-anchored at the nearest previously solved field
        let mut cache: Vec<(f64, Array1<Complex64>, Array1<Complex64>)> = Vec::new();
        let mut eval = |f: f64| -> Result<f64, SolverError> {
            let mut spec = spec_template.clone();
            spec.field_kv_cm = f;
            let h = self.assemble((5, 6), &spec)?;
            let sol = self.eigensolve(&h, levels)?;
            let cols: Vec<Array1<Complex64>> =
                (0..levels).map(|c| sol.vectors.column(c).to_owned()).collect();
            let (ia, ib) = match cache
                .iter()
                .min_by(|x, y| (x.0 - f).abs().partial_cmp(&(y.0 - f).abs()).unwrap())
            {
                None => {
                    // first point: pick the symmetric branch of each doublet
                    let pick = |d: usize| -> Result<usize, SolverError> {
                        let lo = 2 * d;
                        if lo + 1 >= levels {
                            return Err(SolverError::LevelOutOfRange(d, levels / 2));
                        }
                        let p0 = parity_of(&cols[lo], h.block_dim);
                        Ok(if p0 == Parity::Symmetric { lo } else { lo + 1 })
                    };
                    (pick(doublet_a)?, pick(doublet_b)?)
                }
                Some((_, va, vb)) => {
                    let best = |target: &Array1<Complex64>, exclude: Option<usize>| {
                        let mut besti = 0;
                        let mut bestv = -1.0;
                        for (i, c) in cols.iter().enumerate() {
                            if Some(i) == exclude {
                                continue;
                            }
                            let ov: Complex64 =
                                target.iter().zip(c.iter()).map(|(a, b)| a.conj() * b).sum();
                            if ov.norm() > bestv {
                                bestv = ov.norm();
                                besti = i;
                            }
                        }
                        besti
                    };
                    let ia = best(va, None);
                    let ib = best(vb, Some(ia));
                    (ia, ib)
                }
            };
            let gap = (sol.values[ib] - sol.values[ia]).abs();
            cache.push((f, cols[ia].clone(), cols[ib].clone()));
            Ok(gap)
        };
        minimize_gap(&mut eval, f_lo, f_hi, coarse, tol_f)
    }

    /// Ratio |⟨F_1|H_15|F_5⟩| / |⟨F_5|H_56|F_6⟩| at the dot's configured field.
    pub fn cross_axis_coupling(&self, spec: &DotSpec) -> Result<CrossAxisResult, SolverError> {
        let valleys = self.valleys();
        let h1 = self.single_valley_hamiltonian(&valleys[0], spec);
        let h5 = self.single_valley_hamiltonian(&valleys[4], spec);
        let g1 = eigh_lowest(&h1, 1)?;
        let g5 = eigh_lowest(&h5, 1)?;
        let sandwich = |block: &Array2<Complex64>,
                        left: &EigenSolution,
                        right: &EigenSolution| {
            let n = block.nrows();
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n {
                let mut row = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    row += block[(i, j)] * right.vectors[(j, 0)];
                }
                acc += left.vectors[(i, 0)].conj() * row;
            }
            acc.norm()
        };
        let num = sandwich(&self.coupling_block(1, 5, spec)?, &g1, &g5);
        let den = sandwich(&self.coupling_block(5, 6, spec)?, &g5, &g5);
        let ratio = if den == 0.0 { 0.0 } else { num / den };
        Ok(CrossAxisResult {
            numerator_ev: num,
            denominator_ev: den,
            ratio,
        })
    }
}

/// Greedy maximum-overlap assignment of persistent level ids between two
/// consecutive sweep points. Near-ties are recorded as warnings and resolved
/// by energy order.
fn assign_by_overlap(
    prev_ids: &[usize],
    prev: &EigenSolution,
    curr: &EigenSolution,
    warnings: &mut Vec<String>,
) -> Vec<usize> {
    let k = prev_ids.len();
    let n = prev.vectors.nrows();
    let mut overlap = vec![vec![0.0f64; k]; k];
    for a in 0..k {
        for b in 0..k {
            let mut dot = Complex64::new(0.0, 0.0);
            for i in 0..n {
                dot += prev.vectors[(i, a)].conj() * curr.vectors[(i, b)];
            }
            overlap[a][b] = dot.norm();
        }
    }
    let mut entries: Vec<(usize, usize)> = (0..k)
        .flat_map(|a| (0..k).map(move |b| (a, b)))
        .collect();
    entries.sort_by(|&(a1, b1), &(a2, b2)| {
        overlap[a2][b2]
            .partial_cmp(&overlap[a1][b1])
            .unwrap()
            .then(a1.cmp(&a2))
            .then(b1.cmp(&b2))
    });
    let mut ids = vec![usize::MAX; k];
    let mut used_prev = vec![false; k];
    let mut used_curr = vec![false; k];
    for &(a, b) in &entries {
        if used_prev[a] || used_curr[b] {
            continue;
        }
        // ambiguity check: another free candidate within 1e-6 of this overlap
        let best = overlap[a][b];
        let ambiguous = (0..k)
            .filter(|&b2| b2 != b && !used_curr[b2])
            .any(|b2| (overlap[a][b2] - best).abs() < 1e-6);
        if ambiguous {
            warnings.push(format!(
                "ambiguous overlap match for tracked level {} (|overlap| = {:.6}); assigned by energy order",
                prev_ids[a], best
            ));
            // energy-order fallback: keep the candidate closest in energy
            let target = prev.values[a];
            let pick = (0..k)
                .filter(|&b2| !used_curr[b2])
                .filter(|&b2| (overlap[a][b2] - best).abs() < 1e-6)
                .min_by(|&x, &y| {
                    (curr.values[x] - target)
                        .abs()
                        .partial_cmp(&(curr.values[y] - target).abs())
                        .unwrap()
                })
                .unwrap();
            used_prev[a] = true;
            used_curr[pick] = true;
            ids[pick] = prev_ids[a];
        } else {
            used_prev[a] = true;
            used_curr[b] = true;
            ids[b] = prev_ids[a];
        }
    }
    ids
}
