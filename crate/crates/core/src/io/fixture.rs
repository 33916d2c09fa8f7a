use chrono::NaiveDate;

use crate::model::{Endpoints, MetaPropertyGraph, Value, NO_LABELS, NO_PROPS};

/// The running example: two researchers, two publications indexed by two
/// databases, and a node reifying Lee's reviewing activity (assigned by
/// Rose on 5 November 2024).
///
/// Objects are created in a fixed order, so ids are stable: nodes `n1` Lee,
/// `n2` Rose, `n3` "Nature Studies", `n4` "Biology Advancements", `n5`
/// Scopus, `n6` PubMed, `n7` the assignment; edges `e1` Archived, `e2` and
/// `e3` Indexed, `e4` and `e5` reviews, `e6` assigns. Properties are added
/// in key order so that loading the saved document yields an equal graph.
pub fn example_graph() -> MetaPropertyGraph {
    let mut g = MetaPropertyGraph::new();
    let s = Value::from;
    let lee = g
        .add_node(["Person"], [("Name", s("Lee")), ("ResearchField", s("Biology"))])
        .unwrap();
    let rose = g
        .add_node(["Person"], [("Name", s("Rose")), ("ResearchField", s("Ecology"))])
        .unwrap();
    let nature = g
        .add_node(
            ["Publication", "Journal"],
            [
                ("Biology", Value::Integer(2023)),
                ("Ecology", Value::Integer(2024)),
                ("Title", s("Nature Studies")),
            ],
        )
        .unwrap();
    let advancements = g
        .add_node(
            ["Publication", "Conference"],
            [("Biology", Value::Integer(2024)), ("Title", s("Biology Advancements"))],
        )
        .unwrap();
    let scopus = g.add_node(["Indexing_DB"], [("Name", s("Scopus"))]).unwrap();
    let pubmed = g.add_node(["Indexing_DB"], [("Name", s("PubMed"))]).unwrap();
    let date = NaiveDate::from_ymd_opt(2024, 11, 5).expect("valid date");
    let assignment = g.add_node(NO_LABELS, [("Date", Value::Date(date))]).unwrap();

    g.add_edge(Endpoints::directed(nature, scopus), ["Archived"], NO_PROPS)
        .unwrap();
    g.add_edge(Endpoints::directed(nature, pubmed), ["Indexed"], NO_PROPS)
        .unwrap();
    g.add_edge(Endpoints::directed(advancements, pubmed), ["Indexed"], NO_PROPS)
        .unwrap();
    let r1 = g
        .add_edge(Endpoints::directed(lee, nature), ["reviews"], NO_PROPS)
        .unwrap();
    let r2 = g
        .add_edge(Endpoints::directed(lee, advancements), ["reviews"], NO_PROPS)
        .unwrap();
    g.add_edge(Endpoints::directed(rose, assignment), ["assigns"], NO_PROPS)
        .unwrap();

    let reified = [
        lee,
        g.label_id_of(lee).unwrap(),
        g.property_by_key(lee, "Name").unwrap(),
        r1,
        r2,
        g.label_id_of(r1).unwrap(),
        g.label_id_of(r2).unwrap(),
    ];
    g.set_rho(assignment, reified).unwrap();
    g
}
