//! Synthetic worlds for examples, tests and benchmarks.
//!
//! Flows follow a gravity form `w_ij ~ pop_i * attraction_j * affinity(region_i, region_j)`
//! with a symmetric regional affinity, so the Top-1 subgraphs of a noiseless
//! world contain no directed 3-cycles.

use std::collections::BTreeMap;

use chrono::DateTime;
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::LogNormal;

use crate::country::CountryCode;
use crate::graph::{Digraph, MobilityGraph};
use crate::ingest::CheckinRecord;
use crate::regional::RegionMap;

/// `n` distinct codes `AA, AB, ..., AZ, BA, ...` in lexicographic order (n <= 676).
pub fn codes(n: usize) -> Vec<CountryCode> {
    assert!(n <= 26 * 26, "at most 676 synthetic codes");
    (0..n)
        .map(|i| {
            let s = [b'A' + (i / 26) as u8, b'A' + (i % 26) as u8];
            CountryCode::new(std::str::from_utf8(&s).unwrap()).unwrap()
        })
        .collect()
}

/// Erdos-Renyi style digraph with edge probability `p` and weights in `1..=max_weight`.
pub fn random_digraph(n: usize, p: f64, max_weight: u64, seed: u64) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.gen_bool(p) {
                edges.push((i, j, rng.gen_range(1..=max_weight)));
            }
        }
    }
    Digraph::new(codes(n), edges).expect("valid random graph")
}

#[derive(Clone, Debug)]
pub struct World {
    pub countries: Vec<CountryCode>,
    pub regions: Vec<String>,
    pub region_of: Vec<usize>,
    pub population: Vec<f64>,
    pub attraction: Vec<f64>,
    /// Multiplier applied to flows that stay inside a region.
    pub regional_affinity: f64,
}

impl World {
    /// Countries are split round-robin into `n_regions` regions; population and
    /// attraction are log-uniform over roughly three decades.
    pub fn generate(n_countries: usize, n_regions: usize, seed: u64) -> Self {
        assert!(n_regions >= 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let countries = codes(n_countries);
        let regions = (0..n_regions)
            .map(|r| format!("Region {}", r + 1))
            .collect();
        let region_of = (0..n_countries).map(|i| i % n_regions).collect();
        let draw = |rng: &mut ChaCha8Rng| 10f64.powf(rng.gen_range(0.0..3.0));
        let population = (0..n_countries).map(|_| draw(&mut rng)).collect();
        let attraction = (0..n_countries).map(|_| draw(&mut rng)).collect();
        Self {
            countries,
            regions,
            region_of,
            population,
            attraction,
            regional_affinity: 8.0,
        }
    }

    pub fn len(&self) -> usize {
        self.countries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.countries.is_empty()
    }

    fn affinity(&self, i: usize, j: usize) -> f64 {
        if self.region_of[i] == self.region_of[j] {
            self.regional_affinity
        } else {
            1.0
        }
    }

    /// Expected flow intensity from `i` to `j`.
    pub fn intensity(&self, i: usize, j: usize) -> f64 {
        self.population[i] * self.attraction[j] * self.affinity(i, j)
    }

    /// Complete flow graph with `w_ij = max(1, round(scale * intensity / max_intensity))`.
    /// `noise` > 0 multiplies each weight by a log-normal factor with that sigma.
    pub fn flow_graph(&self, label: &str, scale: f64, noise: f64, seed: u64) -> MobilityGraph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.len();
        let max = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| self.intensity(i, j))
            .fold(0.0, f64::max);
        let jitter = (noise > 0.0).then(|| LogNormal::new(0.0, noise).expect("finite sigma"));
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let mut w = scale * self.intensity(i, j) / max;
                if let Some(d) = &jitter {
                    w *= d.sample(&mut rng);
                }
                edges.push((i, j, w.round().max(1.0) as u64));
            }
        }
        MobilityGraph::new(
            label,
            Digraph::new(self.countries.clone(), edges).expect("valid world graph"),
        )
    }

    pub fn region_map(&self) -> RegionMap {
        RegionMap::from_pairs(
            self.countries
                .iter()
                .zip(&self.region_of)
                .map(|(&c, &r)| (c, self.regions[r].clone())),
        )
    }

    /// Simulated check-in log: each user gets a home drawn by population, makes
    /// `home_checkins` check-ins there and visits a few other countries drawn by
    /// regional attraction.
    pub fn checkins(
        &self,
        users: usize,
        home_checkins: usize,
        max_trips: usize,
        seed: u64,
    ) -> Vec<CheckinRecord> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.len();
        let homes = WeightedIndex::new(&self.population).expect("positive populations");
        let destinations: Vec<WeightedIndex<f64>> = (0..n)
            .map(|i| {
                let w: Vec<f64> = (0..n)
                    .map(|j| {
                        if i == j {
                            0.0
                        } else {
                            self.attraction[j] * self.affinity(i, j)
                        }
                    })
                    .collect();
                WeightedIndex::new(w).expect("positive attraction")
            })
            .collect();
        let start = 1_396_310_400; // 2014-04-01T00:00:00Z
        let mut out = Vec::new();
        for u in 0..users {
            let user_id = format!("u{u:06}");
            let home = homes.sample(&mut rng);
            let mut push = |country: usize, rng: &mut ChaCha8Rng| {
                out.push(CheckinRecord {
                    user_id: user_id.clone(),
                    country: self.countries[country],
                    timestamp: DateTime::from_timestamp(start + rng.gen_range(0..10_540_800), 0)
                        .unwrap(),
                    venue_id: Some(format!("v{}", rng.gen_range(0..5000))),
                });
            };
            for _ in 0..home_checkins {
                push(home, &mut rng);
            }
            let trips = rng.gen_range(0..=max_trips);
            for _ in 0..trips {
                let dest = destinations[home].sample(&mut rng);
                let visits = rng.gen_range(1..home_checkins.max(2));
                for _ in 0..visits {
                    push(dest, &mut rng);
                }
            }
        }
        out
    }

    /// Per-country check-in totals implied by a record list.
    pub fn tally(records: &[CheckinRecord]) -> BTreeMap<CountryCode, u64> {
        let mut m = BTreeMap::new();
        for r in records {
            *m.entry(r.country).or_insert(0) += 1;
        }
        m
    }
}
