#![allow(dead_code)]

use std::sync::Arc;

use hallq::engine::Engine;
use hallq::quiver::Quiver;
use hallq::rep::Guards;

pub fn quiver(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Arc<Quiver> {
    Arc::new(
        Quiver::new(
            vertices.iter().map(|s| s.to_string()).collect(),
            arrows.iter().map(|(a, s, t)| (a.to_string(), s.to_string(), t.to_string())).collect(),
        )
        .unwrap(),
    )
}

pub fn point() -> Arc<Quiver> {
    quiver(&["1"], &[])
}

pub fn a2() -> Arc<Quiver> {
    quiver(&["1", "2"], &[("a", "1", "2")])
}

pub fn a3() -> Arc<Quiver> {
    quiver(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")])
}

pub fn kronecker() -> Arc<Quiver> {
    quiver(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")])
}

pub fn a21() -> Arc<Quiver> {
    quiver(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3"), ("c", "1", "3")])
}

pub fn d4() -> Arc<Quiver> {
    quiver(
        &["1", "2", "3", "4", "5"],
        &[("a", "1", "3"), ("b", "2", "3"), ("c", "4", "3"), ("d", "5", "3")],
    )
}

pub fn e6() -> Arc<Quiver> {
    quiver(
        &["1", "2", "3", "4", "5", "6", "7"],
        &[("a", "1", "2"), ("b", "2", "3"), ("c", "4", "3"), ("d", "5", "4"), ("e", "7", "6"), ("f", "6", "3")],
    )
}

pub fn engine(q: &Arc<Quiver>, field: u32) -> Engine {
    Engine::new(q.clone(), field, Guards::default()).unwrap()
}
