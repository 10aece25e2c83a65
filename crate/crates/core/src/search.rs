//! Bounded search for semilattices of double Ward quasigroups that satisfy
//! 3.133 and 3.134 but whose designated idempotents do not form a copy of
//! the index semilattice.
//!
//! Under 3.134 a product `x*y` with `x` in class `a`, `y` in class `b` and
//! `c = ab` equals `B_c(e_c*(e_a*x), e_c*(e_b*y))`, where `B_c` is the
//! block of class `c`. The table is therefore fixed by the blocks and by
//! the maps `u -> e_c*u` from each class `a` into each class `c < a`. The
//! search enumerates blocks and those maps, builds the table, keeps it when
//! it reproduces its own maps, and then filters by full scans of 3.133 and
//! 3.134. Every table meeting the hypotheses within the bounds arises this
//! way, so the search is exhaustive within them.
//!
//! The index semilattice must be a semigroup. The table itself need not be
//! associative; each candidate records whether it is.

use serde::{Deserialize, Serialize};

use crate::clifford::{DecoratedGroupoid, Decoration};
use crate::division::{divide, identity_3_133, identity_3_134, verify_result_14, DivisionKind};
use crate::enumerate::{enumerate_groups, enumerate_semilattices, enumerate_slgs, IsoFilter, MAX_SEMILATTICE_ORDER};
use crate::error::{Error, Result};
use crate::groupoid::Groupoid;
use crate::quasigroup::{double_ward_elements, double_ward_from_group};
use crate::report::{Check, Report, Witness};

/// Largest total order the search accepts.
pub const MAX_SEARCH_TOTAL: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    /// Largest number of elements in a candidate table.
    pub max_total: usize,
    /// Largest number of classes.
    pub max_classes: usize,
    /// How many counterexample tables to keep in the report.
    pub max_examples: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_total: 6,
            max_classes: 6,
            max_examples: 10,
        }
    }
}

/// Which hypotheses and conclusions hold for one table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub n: usize,
    pub table: Vec<Vec<usize>>,
    pub class: Vec<usize>,
    pub e: Vec<usize>,
    pub class_table: Vec<Vec<usize>>,
    /// `(S, *)` is itself a semigroup.
    pub associative: bool,
    /// `({e_alpha}, *)` is isomorphic to the index semilattice.
    pub designated_iso: bool,
    /// The idempotent identity over designated elements holds.
    pub idempotent_identity: bool,
    /// `e_alpha -> alpha` is an isomorphism.
    pub designated_hom: bool,
}

impl Candidate {
    fn new(dg: &DecoratedGroupoid) -> Result<Candidate> {
        let r = verify_result_14(dg)?;
        let ok = |name: &str| r.check(name).is_some_and(Check::passed);
        let (g, d) = (dg.groupoid(), dg.decoration());
        Ok(Candidate {
            n: g.n(),
            table: g.rows(),
            class: d.class_of().to_vec(),
            e: d.e_of_class().to_vec(),
            class_table: d.class_table().rows(),
            associative: g.is_associative(),
            designated_iso: ok("(1)"),
            idempotent_identity: ok("(2)"),
            designated_hom: ok("(3)"),
        })
    }

    pub fn decorated(&self) -> Result<DecoratedGroupoid> {
        let d = Decoration::new(
            self.class.clone(),
            self.e.clone(),
            Groupoid::new(self.class_table.clone())?,
        )?;
        DecoratedGroupoid::new(Groupoid::new(self.table.clone())?, d)
    }
}

/// Counts for one number of classes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub classes: usize,
    pub semilattices: usize,
    /// Choices of semilattice, class sizes and blocks.
    pub configurations: usize,
    /// Families of maps `u -> e_c*u` tried.
    pub families: usize,
    /// Built tables that reproduce their own maps.
    pub consistent: usize,
    /// Tables satisfying 3.133 and 3.134.
    pub hypotheses: usize,
    /// Of those, how many are semigroups.
    pub associative: usize,
    /// Of those, how many fail `({e_alpha}, *) = Y`.
    pub counterexamples: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Control {
    /// Double division outputs of every semilattice of groups in bounds.
    pub divided: usize,
    /// How many of them fail `({e_alpha}, *) = Y`; zero is expected.
    pub failures: usize,
    /// The first failure, tagged with the corpus item it came from.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub bounds: SearchBounds,
    pub tallies: Vec<Tally>,
    /// Counterexamples up to isomorphism of tables, least table first.
    pub counterexamples: Vec<Candidate>,
    /// Counterexamples found in total, before the `max_examples` cut.
    pub counterexamples_total: usize,
    /// Same as above, restricted to associative tables.
    pub associative_counterexamples: usize,
    pub control: Control,
    pub conclusion: String,
    pub notes: Vec<String>,
}

impl SearchReport {
    /// The result as a pass/fail report: the control must pass; the open
    /// question itself is recorded, not asserted.
    pub fn to_report(&self) -> Report {
        let mut rep = Report::new("question 1 search");
        rep.push(
            Check::from_witness("control", self.control.witness.clone()).with_detail(format!(
                "{} double division outputs, {} failures",
                self.control.divided, self.control.failures
            )),
        );
        rep.push(Check::pass("search").with_detail(self.conclusion.clone()));
        for c in &self.counterexamples {
            rep.push(Check::pass("counterexample").with_detail(format!(
                "n={} associative={} table={:?} e={:?}",
                c.n, c.associative, c.table, c.e
            )));
        }
        rep
    }
}

fn check_bounds(b: &SearchBounds) -> Result<()> {
    if b.max_total == 0 || b.max_classes == 0 {
        return Err(Error::ZeroSize);
    }
    if b.max_total > MAX_SEARCH_TOTAL {
        return Err(Error::SizeLimit {
            what: "search total",
            limit: MAX_SEARCH_TOTAL,
            got: b.max_total,
        });
    }
    Ok(())
}

/// A double Ward block: its table and designated element.
#[derive(Clone)]
struct Block {
    table: Groupoid,
    e: usize,
}

/// Every double Ward table of order `m` (up to isomorphism of the group)
/// with every admissible designated element.
fn blocks(m: usize) -> Result<Vec<Block>> {
    let mut out = Vec::new();
    for g in enumerate_groups(m)? {
        let t = double_ward_from_group(&g)?;
        for e in double_ward_elements(&t) {
            out.push(Block { table: t.clone(), e });
        }
    }
    Ok(out)
}

/// All ways to write at most `max_total` as `k` positive parts, in order.
fn compositions(k: usize, max_total: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let rest = k - cur.len() - 1;
        for s in 1..=left.saturating_sub(rest) {
            cur.push(s);
            go(k, left - s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= max_total {
        go(k, max_total, &mut Vec::new(), &mut out);
    }
    out
}

/// One choice of semilattice, sizes and blocks, ready to take map families.
struct Layout<'a> {
    y: &'a Groupoid,
    offset: Vec<usize>,
    blocks: Vec<&'a Block>,
    class_of: Vec<usize>,
    /// `(c, a)` with `c < a`, the free maps `members(a) -> members(c)`.
    pairs: Vec<(usize, usize)>,
}

impl<'a> Layout<'a> {
    fn new(y: &'a Groupoid, sizes: &[usize], blocks: Vec<&'a Block>) -> Layout<'a> {
        let k = y.n();
        let mut offset = vec![0; k + 1];
        for a in 0..k {
            offset[a + 1] = offset[a] + sizes[a];
        }
        let class_of = (0..k).flat_map(|a| std::iter::repeat_n(a, sizes[a])).collect();
        let pairs = (0..k)
            .flat_map(|a| (0..k).map(move |c| (c, a)))
            .filter(|&(c, a)| c != a && y.mul(c, a) == c)
            .collect();
        Layout {
            y,
            offset,
            blocks,
            class_of,
            pairs,
        }
    }

    fn size(&self, a: usize) -> usize {
        self.offset[a + 1] - self.offset[a]
    }

    fn e(&self, a: usize) -> usize {
        self.offset[a] + self.blocks[a].e
    }

    /// Product inside class `a`, on global indices.
    fn inner(&self, a: usize, u: usize, v: usize) -> usize {
        let o = self.offset[a];
        o + self.blocks[a].table.mul(u - o, v - o)
    }

    /// Builds the table from the maps; `maps[i][u - offset]` is `e_c*u` for
    /// the pair `pairs[i] = (c, a)`.
    fn build(&self, maps: &[Vec<usize>], pair_index: &[Vec<Option<usize>>]) -> Groupoid {
        let n = self.class_of.len();
        // e_c * u for u in class a, c <= a
        let down = |c: usize, u: usize| -> usize {
            let a = self.class_of[u];
            if c == a {
                self.inner(a, self.e(a), u)
            } else {
                let i = pair_index[c][a].expect("c is below a");
                maps[i][u - self.offset[a]]
            }
        };
        Groupoid::from_fn(n, |x, y| {
            let (a, b) = (self.class_of[x], self.class_of[y]);
            let c = self.y.mul(a, b);
            let xs = down(c, self.inner(a, self.e(a), x));
            let ys = down(c, self.inner(b, self.e(b), y));
            self.inner(c, xs, ys)
        })
    }

    fn consistent(&self, g: &Groupoid, maps: &[Vec<usize>]) -> bool {
        self.pairs.iter().zip(maps).all(|(&(c, a), map)| {
            let ec = self.e(c);
            (0..self.size(a)).all(|i| g.mul(ec, self.offset[a] + i) == map[i])
        })
    }

    fn decoration(&self) -> Decoration {
        let k = self.y.n();
        Decoration::new(
            self.class_of.clone(),
            (0..k).map(|a| self.e(a)).collect(),
            self.y.clone(),
        )
        .expect("layout decorations are well formed")
    }
}

struct Search {
    bounds: SearchBounds,
    found: IsoFilter,
    examples: Vec<Candidate>,
    total: usize,
    associative: usize,
}

impl Search {
    fn run_layout(&mut self, layout: &Layout<'_>, tally: &mut Tally) -> Result<()> {
        let k = layout.y.n();
        let mut pair_index = vec![vec![None; k]; k];
        for (i, &(c, a)) in layout.pairs.iter().enumerate() {
            pair_index[c][a] = Some(i);
        }
        // every map members(a) -> members(c), as global indices
        let choices: Vec<Vec<Vec<usize>>> = layout
            .pairs
            .iter()
            .map(|&(c, a)| all_maps(layout.size(a), layout.offset[c], layout.size(c)))
            .collect();
        let lens: Vec<usize> = choices.iter().map(Vec::len).collect();
        let mut idx = vec![0usize; choices.len()];
        let decoration = layout.decoration();
        loop {
            tally.families += 1;
            let maps: Vec<Vec<usize>> = idx.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect();
            let g = layout.build(&maps, &pair_index);
            if layout.consistent(&g, &maps) {
                tally.consistent += 1;
                let dg = DecoratedGroupoid::new_unchecked(g, decoration.clone());
                if identity_3_133(&dg).is_none() && identity_3_134(&dg).is_none() {
                    tally.hypotheses += 1;
                    let cand = Candidate::new(&dg)?;
                    if cand.associative {
                        tally.associative += 1;
                    }
                    if !cand.designated_iso {
                        tally.counterexamples += 1;
                        if self.found.insert(dg.groupoid()) {
                            self.total += 1;
                            if cand.associative {
                                self.associative += 1;
                            }
                            self.examples.push(cand);
                        }
                    }
                }
            }
            if !advance(&mut idx, &lens) {
                return Ok(());
            }
        }
    }
}

fn all_maps(from: usize, offset: usize, to: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..from {
        out = out
            .into_iter()
            .flat_map(|m| {
                (0..to).map(move |v| {
                    let mut m = m.clone();
                    m.push(offset + v);
                    m
                })
            })
            .collect();
    }
    out
}

/// Odometer step over `idx`; false once every combination has been seen.
fn advance(idx: &mut [usize], lens: &[usize]) -> bool {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < lens[i] {
            return true;
        }
        idx[i] = 0;
    }
    false
}

/// Searches for tables meeting the hypotheses of the question while
/// `({e_alpha}, *)` fails to be isomorphic to the index semilattice.
pub fn search_question_1(bounds: SearchBounds) -> Result<SearchReport> {
    check_bounds(&bounds)?;
    let mut search = Search {
        bounds,
        found: IsoFilter::new(),
        examples: Vec::new(),
        total: 0,
        associative: 0,
    };
    let max_block = bounds.max_total;
    let block_sets: Vec<Vec<Block>> = (1..=max_block).map(blocks).collect::<Result<_>>()?;
    let mut tallies = Vec::new();
    let searched_classes = bounds.max_classes.min(bounds.max_total).min(MAX_SEMILATTICE_ORDER);
    for k in 1..=searched_classes {
        let ys = enumerate_semilattices(k)?;
        let mut tally = Tally {
            classes: k,
            semilattices: ys.len(),
            ..Tally::default()
        };
        for y in &ys {
            for sizes in compositions(k, bounds.max_total) {
                let options: Vec<&Vec<Block>> = sizes.iter().map(|&s| &block_sets[s - 1]).collect();
                let lens: Vec<usize> = options.iter().map(|o| o.len()).collect();
                let mut idx = vec![0usize; k];
                loop {
                    tally.configurations += 1;
                    let chosen = idx.iter().zip(&options).map(|(&i, o)| &o[i]).collect();
                    let layout = Layout::new(y, &sizes, chosen);
                    search.run_layout(&layout, &mut tally)?;
                    if !advance(&mut idx, &lens) {
                        break;
                    }
                }
            }
        }
        tallies.push(tally);
    }

    let mut examples = std::mem::take(&mut search.examples);
    examples.sort_by(|a, b| (a.n, &a.table).cmp(&(b.n, &b.table)));
    examples.truncate(search.bounds.max_examples);

    let control = control(&bounds)?;
    let mut notes = vec![
        "the index semilattice is a semigroup; the table itself is not required to be associative, and each counterexample records whether it is".to_owned(),
        "tables are built from double Ward blocks and all maps u -> e_c*u; under 3.134 these determine the table, so divide outputs and their perturbations are covered".to_owned(),
        "the second question (a single identity for SLDWQ) and the third (a structure theorem) are not finitely checkable and are out of scope".to_owned(),
    ];
    let top = bounds.max_classes.min(bounds.max_total);
    if top > MAX_SEMILATTICE_ORDER {
        notes.push(if bounds.max_total == MAX_SEMILATTICE_ORDER + 1 {
            format!(
                "{top} classes with total {top} force every class to be trivial, so the table is the index semilattice itself and the claim holds; it is not enumerated"
            )
        } else {
            format!("tables with more than {MAX_SEMILATTICE_ORDER} classes are not searched")
        });
    }
    let conclusion = if search.total == 0 {
        format!(
            "no counterexample within bounds (total at most {}, classes at most {})",
            bounds.max_total, searched_classes
        )
    } else {
        format!(
            "{} counterexample(s) up to isomorphism, {} of them associative",
            search.total, search.associative
        )
    };
    Ok(SearchReport {
        bounds,
        tallies,
        counterexamples: examples,
        counterexamples_total: search.total,
        associative_counterexamples: search.associative,
        control,
        conclusion,
        notes,
    })
}

/// Double division outputs satisfy the hypotheses and the conclusion.
fn control(bounds: &SearchBounds) -> Result<Control> {
    let classes = bounds.max_classes.min(MAX_SEMILATTICE_ORDER);
    let corpus = enumerate_slgs(bounds.max_total, bounds.max_total, classes)?;
    let mut failures = 0;
    let mut witness = None;
    for (i, item) in corpus.iter().enumerate() {
        let dg = item
            .decorated()
            .ok_or_else(|| Error::MalformedStructure(format!("{} lacks a decoration", item.id)))?;
        let q = divide(&dg, DivisionKind::Double)?;
        let rep = verify_result_14(&q)?;
        let check = rep.check("(1)");
        if !check.is_some_and(Check::passed) {
            failures += 1;
            if witness.is_none() {
                let mut w = check
                    .and_then(|c| c.witness.clone())
                    .unwrap_or_else(|| Witness::new(Vec::<(String, usize)>::new()));
                w.assignment.insert(0, ("item".into(), i));
                witness = Some(w);
            }
        }
    }
    Ok(Control {
        divided: corpus.len(),
        failures,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bounds(max_total: usize, max_classes: usize) -> SearchBounds {
        SearchBounds {
            max_total,
            max_classes,
            max_examples: 5,
        }
    }

    #[test]
    fn compositions_count() {
        assert_eq!(
            compositions(2, 4),
            vec![vec![1, 1], vec![1, 2], vec![1, 3], vec![2, 1], vec![2, 2], vec![3, 1]]
        );
        assert!(compositions(5, 4).is_empty());
    }

    #[test]
    fn block_catalogue() {
        // Z2 and Z3 have one and three admissible elements
        assert_eq!(
            blocks(2).unwrap().len(),
            double_ward_elements(&double_ward_from_group(&crate::fixtures::t_z2()).unwrap()).len()
        );
        assert!(blocks(4).unwrap().len() >= 2);
    }

    #[test]
    fn single_class_has_no_counterexample() {
        let r = search_question_1(bounds(4, 1)).unwrap();
        assert_eq!(r.counterexamples_total, 0);
        assert!(r.conclusion.starts_with("no counterexample"));
        assert_eq!(r.tallies.len(), 1);
        assert_eq!(r.tallies[0].hypotheses, r.tallies[0].consistent);
    }

    #[test]
    fn control_passes() {
        let r = search_question_1(bounds(4, 3)).unwrap();
        assert_eq!(r.control.failures, 0);
        assert!(r.control.divided > 0);
        assert!(r.to_report().check("control").unwrap().passed());
    }

    #[test]
    fn divide_outputs_are_found_by_the_search() {
        let r = search_question_1(bounds(4, 2)).unwrap();
        // every divide output of the bounded corpus meets the hypotheses
        let hyp: usize = r.tallies.iter().map(|t| t.hypotheses).sum();
        assert!(hyp >= r.control.divided);
    }

    #[test]
    fn counterexamples_meet_the_hypotheses() {
        let r = search_question_1(bounds(5, 3)).unwrap();
        for c in &r.counterexamples {
            let dg = c.decorated().unwrap();
            assert!(identity_3_133(&dg).is_none() && identity_3_134(&dg).is_none());
            assert!(!c.designated_iso);
        }
    }

    #[test]
    fn rejects_oversized_bounds() {
        assert!(matches!(search_question_1(bounds(9, 2)), Err(Error::SizeLimit { .. })));
        assert!(matches!(search_question_1(bounds(0, 2)), Err(Error::ZeroSize)));
    }
}
