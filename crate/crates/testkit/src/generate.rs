use mpgql_core::model::{parse_date, Endpoints, MetaPropertyGraph, ObjectId, Value};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Size bounds and vocabulary sizes for random graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub max_nodes: usize,
    pub max_edges: usize,
    pub max_props_per_object: usize,
    /// Labels are drawn from `A`, `B`, … of this size.
    pub label_alphabet_size: usize,
    /// Number of distinct property values in use.
    pub value_pool_size: usize,
    /// Chance, in tenths, that a node reifies anything.
    pub rho_density: u8,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            max_nodes: 6,
            max_edges: 6,
            max_props_per_object: 3,
            label_alphabet_size: 3,
            value_pool_size: 4,
            rho_density: 5,
            seed: 0,
        }
    }
}

impl GeneratorConfig {
    pub fn with_seed(self, seed: u64) -> Self {
        GeneratorConfig { seed, ..self }
    }
}

pub fn label_alphabet(size: usize) -> Vec<String> {
    (0..size)
        .map(|i| char::from(b'A' + (i % 26) as u8).to_string())
        .collect()
}

pub fn key_alphabet(size: usize) -> Vec<String> {
    (0..size).map(|i| format!("k{i}")).collect()
}

/// A fixed, mixed-type pool of values: integers, strings, decimals, dates
/// and booleans in rotation.
pub fn value_pool(size: usize) -> Vec<Value> {
    (0..size)
        .map(|i| match i % 5 {
            0 => Value::Integer(i as i64),
            1 => Value::from(format!("s{i}")),
            2 => Value::decimal(i as f64 + 0.5),
            3 => Value::Date(parse_date(&format!("2024-01-{:02}", 1 + i % 28)).expect("valid date")),
            _ => Value::Boolean(i % 2 == 0),
        })
        .collect()
}

fn pick_subset<T: Clone>(rng: &mut ChaCha8Rng, items: &[T], p: f64) -> Vec<T> {
    items.iter().filter(|_| rng.gen_bool(p)).cloned().collect()
}

fn props(rng: &mut ChaCha8Rng, cfg: &GeneratorConfig, keys: &[String], values: &[Value]) -> Vec<(String, Value)> {
    if values.is_empty() || cfg.max_props_per_object == 0 {
        return Vec::new();
    }
    let n = rng.gen_range(0..=cfg.max_props_per_object);
    keys.choose_multiple(rng, n)
        .map(|k| (k.clone(), values.choose(rng).expect("non-empty pool").clone()))
        .collect()
}

/// A random valid graph. The same configuration always yields the same graph.
///
/// ρ is filled last. A node may reify any edge, property or label set, but
/// only nodes created before it, which keeps ρ well-founded without retries.
pub fn gen_graph(cfg: &GeneratorConfig) -> MetaPropertyGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let labels = label_alphabet(cfg.label_alphabet_size);
    let keys = key_alphabet(cfg.max_props_per_object + 1);
    let values = value_pool(cfg.value_pool_size);
    let mut g = MetaPropertyGraph::new();

    let node_count = rng.gen_range(0..=cfg.max_nodes);
    let mut nodes = Vec::with_capacity(node_count);
    for _ in 0..node_count {
        let ls = pick_subset(&mut rng, &labels, 0.4);
        let ps = props(&mut rng, cfg, &keys, &values);
        nodes.push(g.add_node(ls, ps).expect("distinct keys"));
    }
    let edge_count = if nodes.is_empty() {
        0
    } else {
        rng.gen_range(0..=cfg.max_edges)
    };
    for _ in 0..edge_count {
        let a = *nodes.choose(&mut rng).expect("nodes exist");
        let b = *nodes.choose(&mut rng).expect("nodes exist");
        let ends = if rng.gen_bool(0.7) {
            Endpoints::directed(a, b)
        } else {
            Endpoints::undirected(a, b)
        };
        let ls = pick_subset(&mut rng, &labels, 0.4);
        let ps = props(&mut rng, cfg, &keys, &values);
        g.add_edge(ends, ls, ps).expect("endpoints exist");
    }

    let non_nodes: Vec<ObjectId> = g.edges().chain(g.properties()).chain(g.label_sets()).collect();
    let density = f64::from(cfg.rho_density.min(10)) / 10.0;
    for (i, &n) in nodes.iter().enumerate() {
        if !rng.gen_bool(density) {
            continue;
        }
        let mut members = pick_subset(&mut rng, &nodes[..i], 0.4);
        members.extend(pick_subset(&mut rng, &non_nodes, 0.3));
        g.set_rho(n, members).expect("members precede the node");
    }
    g
}
