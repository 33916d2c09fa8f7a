use std::fmt;

/// The four disjoint identifier spaces of a meta-property graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ObjectKind {
    Node,
    Edge,
    Property,
    LabelSet,
}

impl ObjectKind {
    pub const ALL: [ObjectKind; 4] = [
        ObjectKind::Node,
        ObjectKind::Edge,
        ObjectKind::Property,
        ObjectKind::LabelSet,
    ];

    /// Single-letter prefix used when printing identifiers (`n3`, `e1`, `p7`, `l2`).
    pub fn prefix(self) -> char {
        match self {
            ObjectKind::Node => 'n',
            ObjectKind::Edge => 'e',
            ObjectKind::Property => 'p',
            ObjectKind::LabelSet => 'l',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ObjectKind::Node => "node",
            ObjectKind::Edge => "edge",
            ObjectKind::Property => "property",
            ObjectKind::LabelSet => "label-set",
        }
    }
}

impl fmt::Display for ObjectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An object identifier. The kind tag makes the four identifier sets
/// disjoint by construction; the serial is allocated per kind and never reused
/// within one graph instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectId {
    kind: ObjectKind,
    serial: u32,
}

impl ObjectId {
    pub const fn new(kind: ObjectKind, serial: u32) -> Self {
        ObjectId { kind, serial }
    }

    pub const fn node(serial: u32) -> Self {
        Self::new(ObjectKind::Node, serial)
    }

    pub const fn edge(serial: u32) -> Self {
        Self::new(ObjectKind::Edge, serial)
    }

    pub const fn property(serial: u32) -> Self {
        Self::new(ObjectKind::Property, serial)
    }

    pub const fn label_set(serial: u32) -> Self {
        Self::new(ObjectKind::LabelSet, serial)
    }

    pub fn kind(self) -> ObjectKind {
        self.kind
    }

    pub fn serial(self) -> u32 {
        self.serial
    }

    pub fn is_node(self) -> bool {
        self.kind == ObjectKind::Node
    }

    pub fn is_edge(self) -> bool {
        self.kind == ObjectKind::Edge
    }

    /// Nodes and edges are the objects that own label sets and properties.
    pub fn is_element(self) -> bool {
        matches!(self.kind, ObjectKind::Node | ObjectKind::Edge)
    }
}

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.prefix(), self.serial)
    }
}
