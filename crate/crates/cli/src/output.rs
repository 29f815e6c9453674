use frankl_core::SetFamily;
use serde::Serialize;

/// A family as it appears in structured output: universe size, member
/// count, and each member as its sorted element labels.
#[derive(Serialize)]
pub struct FamilyDoc {
    pub n: usize,
    pub m: usize,
    pub members: Vec<Vec<u64>>,
}

impl FamilyDoc {
    pub fn of(f: &SetFamily) -> Self {
        FamilyDoc {
            n: f.universe_size(),
            m: f.member_count(),
            members: (0..f.member_count()).map(|i| f.member_labels(i)).collect(),
        }
    }
}

/// Every structured document has the same top-level shape: the subcommand
/// name, the family it acted on (absent for `verify`), and the
/// command-specific result. Field order is fixed by the struct, so output
/// is byte-identical across runs.
#[derive(Serialize)]
pub struct Envelope<R: Serialize> {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyDoc>,
    pub result: R,
}

pub fn emit<R: Serialize>(envelope: &Envelope<R>) -> String {
    let mut text = serde_json::to_string_pretty(envelope).expect("output types serialize");
    text.push('\n');
    text
}

#[derive(Serialize)]
pub struct CloseResult {
    pub generators: usize,
    pub added: usize,
}

#[derive(Serialize)]
pub struct LayerOut {
    pub peel: usize,
    pub height_number: usize,
    pub members: Vec<Vec<u64>>,
}

#[derive(Serialize)]
pub struct HeightResult {
    pub h: usize,
    pub layers: Vec<LayerOut>,
}

#[derive(Serialize)]
pub struct TentOut {
    pub apex: Vec<u64>,
    pub base: Vec<Vec<u64>>,
    pub size: usize,
}

#[derive(Serialize)]
pub struct TentsResult {
    pub tents: Vec<TentOut>,
}

#[derive(Serialize)]
pub struct RandomResult {
    pub n: usize,
    pub generators: usize,
    pub seed: u64,
}

#[derive(Serialize)]
pub struct DotResult {
    pub dot: String,
}

/// Renders element labels as `{1,2,3}` to match diagnostics elsewhere.
pub fn fmt_set(labels: &[u64]) -> String {
    let inner: Vec<String> = labels.iter().map(u64::to_string).collect();
    format!("{{{}}}", inner.join(","))
}
