//! Families of pairwise non-isomorphic subdirect powers.
//!
//! Over a base of uncountable type, a short recipe produces, for every set
//! of primes, a subdirect power of the base; distinct prime sets give
//! non-isomorphic powers. The recipe:
//!
//! * pick a non-constant monoid element `f_min` of minimal image size and
//!   reorder the carrier as `a_1, .., a_n` so that the last two elements
//!   are merged by it (`f_min(a_{n-1}) = f_min(a_n)`);
//! * over an index set of size `N` (the product of the chosen primes),
//!   partition the positions into residue classes mod `p` for each prime;
//! * for each prime `p` and offset `l`, build the tuple `t_{p,l}` that is
//!   `a_i` on the `i`-th residue class for `i <= n-2`, `a_{n-1}` on the
//!   next `l+1` classes and `a_n` on the rest; the block `T_p` is the
//!   subpower generated by all these tuples;
//! * the witness for a prime subset `K` is the union of the full diagonal
//!   with the blocks `T_k`, `k` in `K`.
//!
//! [`verify_claims`] recomputes, at this finite scale, the facts that make
//! the construction work: residue classes intersect pairwise across
//! distinct primes, `T_p` is connected with exactly `p - n + 1` top
//! components, distinct blocks meet exactly in the constant-value diagonal
//! `D_0` (which is also `T_p`'s intersection with the full diagonal),
//! `T_p` minus `D_0` stays connected, and witnesses for distinct subsets
//! are non-isomorphic.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::UnaryAlgebra;
use crate::digraph::{gamma, outer_sections};
use crate::error::{Error, Result};
use crate::iso::{are_isomorphic_budgeted, IsoOutcome};
use crate::monoid::MonoidElement;
use crate::partition::Partition;
use crate::powers::{diagonals, generate_subpower, Subpower, Tuple};
use crate::Limits;

/// Everything fixed before tuples are built: the base algebra, the chosen
/// primes, the minimal-image map and the carrier reordering it induces.
#[derive(Debug, Clone)]
pub struct WitnessConfig {
    algebra: UnaryAlgebra,
    f_min: MonoidElement,
    merged_pair: (usize, usize),
    reorder: Vec<usize>,
    primes: Vec<usize>,
    n_positions: usize,
}

fn is_prime(candidate: usize) -> bool {
    if candidate < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= candidate {
        if candidate % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl WitnessConfig {
    /// Validates the parameters and fixes the reordering.
    ///
    /// Requirements: the algebra is of uncountable type (which forces a
    /// carrier of at least three elements) and `primes` is a non-empty,
    /// strictly increasing list of primes, each at least the carrier size.
    pub fn new(algebra: UnaryAlgebra, primes: &[usize], limits: &Limits) -> Result<Self> {
        let n = algebra.carrier_size();
        if primes.is_empty() {
            return Err(Error::InvalidWitness("at least one prime is required".into()));
        }
        for window in primes.windows(2) {
            if window[0] >= window[1] {
                return Err(Error::InvalidWitness(format!(
                    "primes must be strictly increasing, got {} before {}",
                    window[0], window[1]
                )));
            }
        }
        for &p in primes {
            if !is_prime(p) {
                return Err(Error::InvalidWitness(format!("{p} is not prime")));
            }
            if p < n {
                return Err(Error::InvalidWitness(format!(
                    "prime {p} is smaller than the carrier size {n}"
                )));
            }
        }
        let mut n_positions: usize = 1;
        for &p in primes {
            n_positions = n_positions
                .checked_mul(p)
                .ok_or_else(|| Error::InvalidWitness("prime product overflows".into()))?;
        }

        let f_min = algebra.min_image_nonconstant(limits)?;
        // Lexicographically least merged pair; one exists because the image
        // is strictly smaller than the carrier.
        let merged_pair = (0..n)
            .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
            .find(|&(a, b)| f_min.apply(a) == f_min.apply(b))
            .expect("a non-injective map merges some pair");
        let mut reorder: Vec<usize> = (0..n)
            .filter(|&x| x != merged_pair.0 && x != merged_pair.1)
            .collect();
        reorder.push(merged_pair.0);
        reorder.push(merged_pair.1);

        Ok(WitnessConfig {
            algebra,
            f_min,
            merged_pair,
            reorder,
            primes: primes.to_vec(),
            n_positions,
        })
    }

    pub fn algebra(&self) -> &UnaryAlgebra {
        &self.algebra
    }

    /// The chosen minimal-image non-constant monoid element.
    pub fn f_min(&self) -> &MonoidElement {
        &self.f_min
    }

    /// The pair merged by `f_min`, placed last by the reordering.
    pub fn merged_pair(&self) -> (usize, usize) {
        self.merged_pair
    }

    /// Carrier elements in their roles: `reorder()[i]` plays `a_{i+1}`.
    pub fn reorder(&self) -> &[usize] {
        &self.reorder
    }

    pub fn primes(&self) -> &[usize] {
        &self.primes
    }

    /// The index-set size: the product of the primes.
    pub fn n_positions(&self) -> usize {
        self.n_positions
    }

    /// The non-isomorphism claim needs every prime above twice the carrier
    /// size, so that top-component counts of distinct blocks stay apart.
    pub fn claim5_eligible(&self) -> bool {
        self.primes
            .iter()
            .all(|&p| p > 2 * self.algebra.carrier_size())
    }
}

/// Partition of `{0, .., n_positions-1}` into residue classes mod
/// `modulus`; class `i` holds the positions congruent to `i`.
pub fn residue_partition(modulus: usize, n_positions: usize) -> Result<Partition> {
    if modulus == 0 || n_positions % modulus != 0 {
        return Err(Error::NotDivisible {
            modulus,
            n_positions,
        });
    }
    let assignment: Vec<usize> = (0..n_positions).map(|j| j % modulus).collect();
    Ok(Partition::from_class_assignment(&assignment))
}

/// The generating tuple `t_{p, offset}`: residue class `i` (0-based) gets
/// `a_{i+1}` for `i < n-2`, classes `n-2 ..= n-2+offset` get `a_{n-1}`, and
/// the remaining classes get `a_n`.
///
/// `offset` ranges over `0 ..= p - n`.
pub fn generator_tuple(config: &WitnessConfig, prime: usize, offset: usize) -> Result<Tuple> {
    if !config.primes.contains(&prime) {
        return Err(Error::InvalidWitness(format!(
            "{prime} is not one of the configured primes"
        )));
    }
    let n = config.algebra.carrier_size();
    let max_offset = prime - n;
    if offset > max_offset {
        return Err(Error::OffsetOutOfRange {
            offset,
            max: max_offset,
        });
    }
    let roles = &config.reorder;
    let entries = (0..config.n_positions)
        .map(|j| {
            let class = j % prime;
            if class < n - 2 {
                roles[class]
            } else if class <= n - 2 + offset {
                roles[n - 2]
            } else {
                roles[n - 1]
            }
        })
        .collect();
    Ok(Tuple(entries))
}

/// The block `T_p`: the subpower generated by every `t_{p, offset}`.
pub fn build_block(config: &WitnessConfig, prime: usize, limits: &Limits) -> Result<Subpower> {
    let n = config.algebra.carrier_size();
    if !config.primes.contains(&prime) {
        return Err(Error::InvalidWitness(format!(
            "{prime} is not one of the configured primes"
        )));
    }
    let generators: Vec<Tuple> = (0..=(prime - n))
        .map(|offset| generator_tuple(config, prime, offset))
        .collect::<Result<_>>()?;
    generate_subpower(&config.algebra, config.n_positions, &generators, limits)
}

/// The witness `S_K` for a subset `K` of the primes: the union of the full
/// diagonal with the blocks of the members of `K`. `K` may be empty (the
/// witness is then the diagonal itself).
pub fn build_witness(
    config: &WitnessConfig,
    subset: &[usize],
    limits: &Limits,
) -> Result<Subpower> {
    let mut subset: Vec<usize> = subset.to_vec();
    subset.sort_unstable();
    subset.dedup();
    for &k in &subset {
        if !config.primes.contains(&k) {
            return Err(Error::InvalidWitness(format!(
                "{k} is not one of the configured primes"
            )));
        }
    }
    let diagonal = diagonals(&config.algebra, config.n_positions, limits)?.d;
    let blocks: Vec<Subpower> = subset
        .iter()
        .map(|&k| build_block(config, k, limits))
        .collect::<Result<_>>()?;
    let mut parts: Vec<&Subpower> = vec![&diagonal];
    parts.extend(blocks.iter());
    Subpower::union(&parts)
}

/// One verified fact inside a [`ClaimReport`].
#[derive(Debug, Clone, Serialize)]
pub struct ClaimCheck {
    /// Which claim the fact belongs to: "1.i", "1.ii", "1.iii", "2", "3",
    /// "4" or "5".
    pub claim: String,
    /// Instantiated parameters, e.g. `p=7` or `K={7}, L={7,11}`.
    pub params: String,
    pub computed: String,
    pub expected: String,
    /// For claim 5: which method decided ("search" or "invariant").
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    pub pass: bool,
}

/// Result of [`verify_claims`]: one record per checked fact plus notes for
/// anything skipped.
#[derive(Debug, Clone, Serialize)]
pub struct ClaimReport {
    pub algebra: String,
    pub carrier_size: usize,
    pub primes: Vec<usize>,
    pub n_positions: usize,
    pub f_min_table: Vec<usize>,
    pub reorder: Vec<usize>,
    pub checks: Vec<ClaimCheck>,
    pub notes: Vec<String>,
    pub all_pass: bool,
}

impl fmt::Display for ClaimReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "witness verification for {} (carrier {}, primes {:?}, N = {})",
            self.algebra, self.carrier_size, self.primes, self.n_positions
        )?;
        writeln!(
            f,
            "f_min = {:?}, carrier roles a_1..a_n = {:?}",
            self.f_min_table, self.reorder
        )?;
        for check in &self.checks {
            let method = check
                .method
                .as_deref()
                .map(|m| format!(" [{m}]"))
                .unwrap_or_default();
            writeln!(
                f,
                "claim {} ({}): {} | expected {}{} => {}",
                check.claim,
                check.params,
                check.computed,
                check.expected,
                method,
                if check.pass { "pass" } else { "FAIL" }
            )?;
        }
        for note in &self.notes {
            writeln!(f, "note: {note}")?;
        }
        writeln!(
            f,
            "overall: {}",
            if self.all_pass { "all checks pass" } else { "FAILURES present" }
        )
    }
}

/// Options for [`verify_claims`].
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Restrict claim 5 to subsets with at most this many primes.
    pub subsets_max: Option<usize>,
    /// Node budget per isomorphism search in claim 5; on exhaustion the
    /// pair is decided by the top-count invariant instead.
    pub search_budget: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            subsets_max: None,
            search_budget: 1_000_000,
        }
    }
}

/// Multiset of top-component counts used as the claim-5 invariant: over
/// outer sections when the witness is connected with a bottom component,
/// over connected components otherwise.
fn top_count_multiset(algebra: &UnaryAlgebra) -> (String, BTreeMap<usize, usize>) {
    let mut multiset = BTreeMap::new();
    match outer_sections(algebra) {
        Ok(sections) => {
            for section in &sections {
                let count = section.to_digraph().analyze().top_scc_count();
                *multiset.entry(count).or_insert(0) += 1;
            }
            ("outer sections".to_string(), multiset)
        }
        Err(_) => {
            let analysis = gamma(algebra).analyze();
            let components = analysis.connected_components();
            let mut per_component = vec![0usize; components.num_classes()];
            for &top in analysis.top_sccs() {
                let member = analysis.sccs().blocks()[top][0];
                per_component[components.class_of(member)] += 1;
            }
            for count in per_component {
                *multiset.entry(count).or_insert(0) += 1;
            }
            ("connected components".to_string(), multiset)
        }
    }
}

fn format_multiset(multiset: &BTreeMap<usize, usize>) -> String {
    let parts: Vec<String> = multiset
        .iter()
        .map(|(count, times)| {
            if *times == 1 {
                count.to_string()
            } else {
                format!("{count}x{times}")
            }
        })
        .collect();
    format!("{{{}}}", parts.join(","))
}

fn format_subset(subset: &[usize]) -> String {
    let parts: Vec<String> = subset.iter().map(usize::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

/// Decides one claim-5 pair: runs the budgeted search and, if the budget
/// runs out, falls back to comparing the top-count multisets. Returns
/// (pass, deciding method, description).
fn claim5_decision(
    left: &UnaryAlgebra,
    right: &UnaryAlgebra,
    left_invariant: (&str, &BTreeMap<usize, usize>),
    right_invariant: (&str, &BTreeMap<usize, usize>),
    search_budget: u64,
) -> Result<(bool, &'static str, String)> {
    let invariant_separates =
        left_invariant.1 != right_invariant.1 || left_invariant.0 != right_invariant.0;
    let invariant_text = format!(
        "top counts over {}: {} vs {}",
        left_invariant.0,
        format_multiset(left_invariant.1),
        format_multiset(right_invariant.1)
    );
    Ok(match are_isomorphic_budgeted(left, right, search_budget)? {
        IsoOutcome::Decided(None) => (
            true,
            "search",
            format!("search found no isomorphism; {invariant_text}"),
        ),
        IsoOutcome::Decided(Some(_)) => (
            false,
            "search",
            format!("search FOUND an isomorphism; {invariant_text}"),
        ),
        IsoOutcome::BudgetExhausted => (
            invariant_separates,
            "invariant",
            format!("search budget exhausted; {invariant_text}"),
        ),
    })
}

/// Recomputes the facts behind the construction at this finite scale. See
/// the module documentation for the claim list.
pub fn verify_claims(
    config: &WitnessConfig,
    options: &VerifyOptions,
    limits: &Limits,
) -> Result<ClaimReport> {
    let n = config.algebra.carrier_size();
    let big_n = config.n_positions;
    let mut checks: Vec<ClaimCheck> = Vec::new();
    let mut notes: Vec<String> = Vec::new();

    // Claim 1.i: each residue partition has exactly p classes.
    let mut partitions = Vec::new();
    for &p in &config.primes {
        let partition = residue_partition(p, big_n)?;
        checks.push(ClaimCheck {
            claim: "1.i".into(),
            params: format!("p={p}"),
            computed: format!("{} residue classes", partition.num_classes()),
            expected: format!("{p} classes"),
            method: None,
            pass: partition.num_classes() == p,
        });
        partitions.push((p, partition));
    }

    // Claim 1.ii: class counts are at least n and strictly increasing.
    let counts: Vec<usize> = partitions.iter().map(|(_, s)| s.num_classes()).collect();
    let ordered = counts.first().map_or(false, |&first| first >= n)
        && counts.windows(2).all(|w| w[0] < w[1]);
    checks.push(ClaimCheck {
        claim: "1.ii".into(),
        params: format!("counts={counts:?}"),
        computed: format!("n={n}, counts {counts:?}"),
        expected: "n <= c_1 < c_2 < ...".into(),
        method: None,
        pass: ordered,
    });

    // Claim 1.iii: classes of distinct primes intersect pairwise.
    for i in 0..partitions.len() {
        for j in (i + 1)..partitions.len() {
            let (p, ref sp) = partitions[i];
            let (q, ref sq) = partitions[j];
            let mut hit = vec![false; sp.num_classes() * sq.num_classes()];
            for position in 0..big_n {
                hit[sp.class_of(position) * sq.num_classes() + sq.class_of(position)] = true;
            }
            let intersecting = hit.iter().filter(|&&h| h).count();
            checks.push(ClaimCheck {
                claim: "1.iii".into(),
                params: format!("p={p}, q={q}"),
                computed: format!("{intersecting} intersecting class pairs"),
                expected: format!("{} pairs", p * q),
                method: None,
                pass: intersecting == p * q,
            });
        }
    }

    // Claims 2 and 4 need the blocks and the diagonal data.
    let diagonal_sets = diagonals(&config.algebra, big_n, limits)?;
    let d0_elements: Vec<Tuple> = diagonal_sets.d0.elements().to_vec();
    let mut blocks: Vec<(usize, Subpower)> = Vec::new();
    for &p in &config.primes {
        blocks.push((p, build_block(config, p, limits)?));
    }

    for (p, block) in &blocks {
        let induced = block.induced_algebra()?;
        let analysis = gamma(&induced.algebra).analyze();
        let expected_tops = p - n + 1;
        checks.push(ClaimCheck {
            claim: "2".into(),
            params: format!("p={p}"),
            computed: format!(
                "{} top components, {} connected component(s), {} elements",
                analysis.top_scc_count(),
                analysis.connected_components().num_classes(),
                block.len()
            ),
            expected: format!("{expected_tops} top components, connected"),
            method: None,
            pass: analysis.top_scc_count() == expected_tops && analysis.is_connected(),
        });
    }

    // Claim 3: pairwise block intersections and block-diagonal
    // intersections both equal D_0.
    for i in 0..blocks.len() {
        let (p, ref tp) = blocks[i];
        let with_d = tp.intersect_elements(&diagonal_sets.d);
        checks.push(ClaimCheck {
            claim: "3".into(),
            params: format!("p={p}, diagonal"),
            computed: format!("|T_p ∩ D| = {}", with_d.len()),
            expected: format!("D_0 ({} tuples)", d0_elements.len()),
            method: None,
            pass: with_d == d0_elements,
        });
        for (q, tq) in blocks.iter().skip(i + 1) {
            let common = tp.intersect_elements(tq);
            checks.push(ClaimCheck {
                claim: "3".into(),
                params: format!("p={p}, q={q}"),
                computed: format!("|T_p ∩ T_q| = {}", common.len()),
                expected: format!("D_0 ({} tuples)", d0_elements.len()),
                method: None,
                pass: common == d0_elements,
            });
        }
    }

    // Claim 4: each block stays connected after removing D_0.
    for (p, block) in &blocks {
        let keep: Vec<usize> = block
            .elements()
            .iter()
            .enumerate()
            .filter(|(_, tuple)| !d0_elements.contains(tuple))
            .map(|(index, _)| index)
            .collect();
        let induced = block.induced_algebra()?;
        let digraph = gamma(&induced.algebra);
        // Undirected connectivity of the induced subgraph on `keep`.
        let rank: BTreeMap<usize, usize> =
            keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adjacency = vec![Vec::new(); keep.len()];
        for &(u, v, _) in digraph.edges() {
            if let (Some(&ru), Some(&rv)) = (rank.get(&u), rank.get(&v)) {
                adjacency[ru].push(rv);
                adjacency[rv].push(ru);
            }
        }
        let connected = if keep.is_empty() {
            false
        } else {
            let mut seen = vec![false; keep.len()];
            let mut stack = vec![0];
            seen[0] = true;
            let mut visited = 1;
            while let Some(u) = stack.pop() {
                for &v in &adjacency[u] {
                    if !seen[v] {
                        seen[v] = true;
                        visited += 1;
                        stack.push(v);
                    }
                }
            }
            visited == keep.len()
        };
        checks.push(ClaimCheck {
            claim: "4".into(),
            params: format!("p={p}"),
            computed: format!(
                "T_p minus D_0 has {} tuples, connected = {connected}",
                keep.len()
            ),
            expected: "non-empty and connected".into(),
            method: None,
            pass: connected,
        });
    }

    // Claim 5: witnesses of distinct prime subsets are non-isomorphic.
    if !config.claim5_eligible() {
        notes.push(format!(
            "claim 5 skipped: it requires every prime to exceed twice the carrier size \
             ({}), but the primes are {:?}",
            2 * n,
            config.primes
        ));
    } else {
        let mut subsets: Vec<Vec<usize>> = Vec::new();
        for mask in 0u32..(1 << config.primes.len()) {
            let subset: Vec<usize> = config
                .primes
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask & (1 << i) != 0)
                .map(|(_, &p)| p)
                .collect();
            if options.subsets_max.map_or(true, |max| subset.len() <= max) {
                subsets.push(subset);
            }
        }
        let witnesses: Vec<(Vec<usize>, crate::powers::InducedAlgebra, BTreeMap<usize, usize>, String)> = subsets
            .iter()
            .map(|subset| {
                let witness = build_witness(config, subset, limits)?;
                let induced = witness.induced_algebra()?;
                let (granularity, multiset) = top_count_multiset(&induced.algebra);
                Ok((subset.clone(), induced, multiset, granularity))
            })
            .collect::<Result<_>>()?;

        for i in 0..witnesses.len() {
            for j in (i + 1)..witnesses.len() {
                let (ref sk, ref wk, ref mk, ref gk) = witnesses[i];
                let (ref sl, ref wl, ref ml, ref gl) = witnesses[j];
                let (pass, method, computed) = claim5_decision(
                    &wk.algebra,
                    &wl.algebra,
                    (gk, mk),
                    (gl, ml),
                    options.search_budget,
                )?;
                checks.push(ClaimCheck {
                    claim: "5".into(),
                    params: format!("K={}, L={}", format_subset(sk), format_subset(sl)),
                    computed,
                    expected: "non-isomorphic".into(),
                    method: Some(method.to_string()),
                    pass,
                });
            }
        }
    }

    let all_pass = checks.iter().all(|check| check.pass);
    Ok(ClaimReport {
        algebra: config
            .algebra
            .name()
            .unwrap_or("(unnamed algebra)")
            .to_string(),
        carrier_size: n,
        primes: config.primes.clone(),
        n_positions: big_n,
        f_min_table: config.f_min.table().to_vec(),
        reorder: config.reorder.clone(),
        checks,
        notes,
        all_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> UnaryAlgebra {
        UnaryAlgebra::new(Some("chain"), 3, vec![("f".into(), vec![0, 0, 1])]).unwrap()
    }

    fn chain_config(primes: &[usize]) -> WitnessConfig {
        WitnessConfig::new(chain(), primes, &Limits::default()).unwrap()
    }

    fn t(entries: &[usize]) -> Tuple {
        Tuple(entries.to_vec())
    }

    #[test]
    fn config_reorders_the_chain_carrier_as_2_0_1() {
        let config = chain_config(&[5]);
        // f merges 0 and 1, so they take the last two roles.
        assert_eq!(config.merged_pair(), (0, 1));
        assert_eq!(config.reorder(), &[2, 0, 1]);
        assert_eq!(config.f_min().table(), &[0, 0, 1]);
        assert_eq!(config.n_positions(), 5);
    }

    #[test]
    fn config_validation() {
        let limits = Limits::default();
        assert!(matches!(
            WitnessConfig::new(chain(), &[], &limits),
            Err(Error::InvalidWitness(_))
        ));
        assert!(matches!(
            WitnessConfig::new(chain(), &[4], &limits),
            Err(Error::InvalidWitness(_))
        ));
        assert!(matches!(
            WitnessConfig::new(chain(), &[7, 5], &limits),
            Err(Error::InvalidWitness(_))
        ));
        assert!(matches!(
            WitnessConfig::new(chain(), &[2, 5], &limits),
            Err(Error::InvalidWitness(_))
        ));
        let countable =
            UnaryAlgebra::new(None::<&str>, 3, vec![("c".into(), vec![1, 2, 0])]).unwrap();
        assert!(matches!(
            WitnessConfig::new(countable, &[5], &limits),
            Err(Error::NotUncountable)
        ));
    }

    #[test]
    fn residue_partition_shapes() {
        let sigma = residue_partition(5, 35).unwrap();
        assert_eq!(sigma.num_classes(), 5);
        assert!(sigma.blocks().iter().all(|block| block.len() == 7));
        assert!(matches!(
            residue_partition(4, 35),
            Err(Error::NotDivisible { .. })
        ));
        assert!(matches!(
            residue_partition(0, 35),
            Err(Error::NotDivisible { .. })
        ));
    }

    #[test]
    fn residue_partitions_of_coprime_moduli_intersect_everywhere() {
        let sigma5 = residue_partition(5, 35).unwrap();
        let sigma7 = residue_partition(7, 35).unwrap();
        for b5 in sigma5.blocks() {
            for b7 in sigma7.blocks() {
                assert!(b5.iter().any(|x| b7.contains(x)));
            }
        }
    }

    #[test]
    fn generator_tuples_match_hand_computation() {
        let config = chain_config(&[5]);
        assert_eq!(
            generator_tuple(&config, 5, 0).unwrap(),
            t(&[2, 0, 1, 1, 1])
        );
        assert_eq!(
            generator_tuple(&config, 5, 1).unwrap(),
            t(&[2, 0, 0, 1, 1])
        );
        assert_eq!(
            generator_tuple(&config, 5, 2).unwrap(),
            t(&[2, 0, 0, 0, 1])
        );
        assert!(matches!(
            generator_tuple(&config, 5, 3),
            Err(Error::OffsetOutOfRange { max: 2, .. })
        ));
        assert!(matches!(
            generator_tuple(&config, 7, 0),
            Err(Error::InvalidWitness(_))
        ));
    }

    #[test]
    fn residue_classes_refine_generator_formats_which_are_incomparable() {
        let config = chain_config(&[7]);
        let sigma = residue_partition(7, 7).unwrap();
        let tuples: Vec<Tuple> = (0..=4)
            .map(|offset| generator_tuple(&config, 7, offset).unwrap())
            .collect();
        for tuple in &tuples {
            // Positions in one residue class carry one value.
            assert!(sigma.refines(&tuple.format()));
            // Every carrier element appears.
            assert_eq!(tuple.content().len(), 3);
        }
        for (i, left) in tuples.iter().enumerate() {
            for right in tuples.iter().skip(i + 1) {
                assert!(!left.format().refines(&right.format()));
                assert!(!right.format().refines(&left.format()));
            }
        }
    }

    #[test]
    fn single_prime_witness_splits_into_the_expected_outer_sections() {
        // S_{7} minus its bottom (the zero diagonal) falls apart into the
        // rest of the diagonal (one top) and T_7 minus the diagonal (five
        // tops).
        let config = chain_config(&[7]);
        let witness = build_witness(&config, &[7], &Limits::default()).unwrap();
        let induced = witness.induced_algebra().unwrap().algebra;
        let sections = crate::digraph::outer_sections(&induced).unwrap();
        let mut top_counts: Vec<usize> = sections
            .iter()
            .map(|s| s.to_digraph().analyze().top_scc_count())
            .collect();
        top_counts.sort_unstable();
        assert_eq!(top_counts, vec![1, 5]);
    }

    #[test]
    fn generator_images_under_f_min_coincide() {
        let config = chain_config(&[7]);
        let images: Vec<Tuple> = (0..=4)
            .map(|offset| {
                let tuple = generator_tuple(&config, 7, offset).unwrap();
                crate::powers::apply_pointwise(config.algebra(), "f", &tuple).unwrap()
            })
            .collect();
        assert!(images.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn block_t7_has_seven_elements_and_five_tops() {
        let config = chain_config(&[7]);
        let block = build_block(&config, 7, &Limits::default()).unwrap();
        // Pinned by breadth-first closure: 5 generators, their common
        // f-image, and the zero diagonal.
        assert_eq!(block.len(), 7);
        let analysis = gamma(&block.induced_algebra().unwrap().algebra).analyze();
        assert!(analysis.is_connected());
        assert_eq!(analysis.top_scc_count(), 5);
    }

    #[test]
    fn witness_for_the_empty_subset_is_the_diagonal() {
        let config = chain_config(&[5]);
        let witness = build_witness(&config, &[], &Limits::default()).unwrap();
        assert_eq!(
            witness.elements(),
            &[
                Tuple::constant(5, 0),
                Tuple::constant(5, 1),
                Tuple::constant(5, 2)
            ]
        );
        assert!(witness.is_subdirect());
    }

    #[test]
    fn witnesses_contain_the_diagonal_and_are_subdirect() {
        let config = chain_config(&[5, 7]);
        let limits = Limits::default();
        let witness = build_witness(&config, &[5, 7], &limits).unwrap();
        assert!(witness.is_closed());
        assert!(witness.is_subdirect());
        for value in 0..3 {
            assert!(witness.contains(&Tuple::constant(35, value)));
        }
        assert!(matches!(
            build_witness(&config, &[11], &limits),
            Err(Error::InvalidWitness(_))
        ));
    }

    #[test]
    fn blocks_for_distinct_primes_meet_exactly_in_d0() {
        let config = chain_config(&[5, 7]);
        let limits = Limits::default();
        let t5 = build_block(&config, 5, &limits).unwrap();
        let t7 = build_block(&config, 7, &limits).unwrap();
        let common = t5.intersect_elements(&t7);
        assert_eq!(common, vec![Tuple::constant(35, 0)]);
        let d = diagonals(config.algebra(), 35, &limits).unwrap();
        assert_eq!(t5.intersect_elements(&d.d), vec![Tuple::constant(35, 0)]);
    }

    #[test]
    fn verify_claims_passes_for_chain_7_11() {
        let config = chain_config(&[7, 11]);
        let report =
            verify_claims(&config, &VerifyOptions::default(), &Limits::default()).unwrap();
        assert!(report.all_pass, "{report}");
        assert_eq!(report.n_positions, 77);
        // Claim 2 computed 5 and 9 top components.
        let tops: Vec<&ClaimCheck> =
            report.checks.iter().filter(|c| c.claim == "2").collect();
        assert!(tops[0].computed.starts_with("5 top components"));
        assert!(tops[1].computed.starts_with("9 top components"));
        // Claim 5 ran: primes 7 and 11 exceed 2n = 6.
        assert!(report.checks.iter().any(|c| c.claim == "5"));
        assert!(report.notes.is_empty());
    }

    #[test]
    fn small_primes_skip_claim_5_with_a_note() {
        let config = chain_config(&[3, 5]);
        let report =
            verify_claims(&config, &VerifyOptions::default(), &Limits::default()).unwrap();
        assert!(report.checks.iter().all(|c| c.claim != "5"));
        assert_eq!(report.notes.len(), 1);
        assert!(report.notes[0].contains("claim 5 skipped"));
        // Everything that did run still passes.
        assert!(report.all_pass, "{report}");
    }

    #[test]
    fn subsets_max_restricts_claim_5_pairs() {
        let config = chain_config(&[7, 11]);
        let options = VerifyOptions {
            subsets_max: Some(1),
            ..VerifyOptions::default()
        };
        let report = verify_claims(&config, &options, &Limits::default()).unwrap();
        // Subsets {}, {7}, {11}: three pairs.
        let claim5 = report.checks.iter().filter(|c| c.claim == "5").count();
        assert_eq!(claim5, 3);
        assert!(report.all_pass, "{report}");
    }

    #[test]
    fn chain_witness_pairs_are_separated_by_the_search_prunes_alone() {
        // Distinct prime subsets give chain witnesses of distinct sizes, so
        // even a unit budget leaves every pair search-decided.
        let config = chain_config(&[7, 11]);
        let options = VerifyOptions {
            subsets_max: Some(1),
            search_budget: 1,
        };
        let report = verify_claims(&config, &options, &Limits::default()).unwrap();
        let claim5: Vec<&ClaimCheck> =
            report.checks.iter().filter(|c| c.claim == "5").collect();
        assert_eq!(claim5.len(), 3);
        assert!(claim5.iter().all(|c| c.method.as_deref() == Some("search")));
        assert!(report.all_pass, "{report}");
    }

    #[test]
    fn exhausted_budget_falls_back_to_the_invariant() {
        // Two relabelings of one algebra share every cheap invariant, so
        // the search must canonicalize; a unit budget cannot finish that,
        // and the decision falls to the top-count multisets (equal here,
        // so the pair correctly fails to separate).
        let left = chain();
        let right = left.relabel(&[1, 2, 0]).unwrap();
        let inv_left = top_count_multiset(&left);
        let inv_right = top_count_multiset(&right);
        let (pass, method, computed) = claim5_decision(
            &left,
            &right,
            (&inv_left.0, &inv_left.1),
            (&inv_right.0, &inv_right.1),
            1,
        )
        .unwrap();
        assert_eq!(method, "invariant");
        assert!(!pass);
        assert!(computed.contains("budget exhausted"));

        // With room to search, the same pair is decided by the search.
        let (pass, method, _) = claim5_decision(
            &left,
            &right,
            (&inv_left.0, &inv_left.1),
            (&inv_right.0, &inv_right.1),
            1_000_000,
        )
        .unwrap();
        assert_eq!(method, "search");
        assert!(!pass);
    }
}
