//! JSON file formats for frames, congruences, biframes, and bispaces.
//!
//! All documents carry a `kind` discriminator. The frame matrix is given
//! in full; index 0 need not be the bottom element (bounds are computed
//! at validation).

use crate::biframe::{validate_biframe, Biframe};
use crate::bispace::FiniteBispace;
use crate::congruence::Congruence;
use crate::error::{Error, Result};
use crate::lattice::{validate_frame_with_labels, FiniteFrame};
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::sync::Arc;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FrameDoc {
    pub kind: String,
    pub n: usize,
    pub leq: Vec<Vec<u8>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum FrameRef {
    Inline(FrameDoc),
    Path(String),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CongruenceDoc {
    pub kind: String,
    pub frame: FrameRef,
    pub classes: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BiframeDoc {
    pub kind: String,
    pub plus: FrameDoc,
    pub minus: FrameDoc,
    pub main: FrameDoc,
    pub embed_plus: Vec<usize>,
    pub embed_minus: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BispaceDoc {
    pub kind: String,
    pub points: usize,
    pub opens_plus: Vec<u64>,
    pub opens_minus: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

pub fn frame_to_doc(f: &FiniteFrame) -> FrameDoc {
    FrameDoc {
        kind: "frame".into(),
        n: f.n(),
        leq: f
            .leq_rows()
            .into_iter()
            .map(|row| row.into_iter().map(u8::from).collect())
            .collect(),
        labels: f.labels().map(|l| l.to_vec()),
    }
}

pub fn frame_from_doc(doc: &FrameDoc) -> Result<FiniteFrame> {
    if doc.kind != "frame" {
        return Err(Error::BadInput(format!("expected kind \"frame\", got {:?}", doc.kind)));
    }
    let rows: Vec<Vec<bool>> = doc
        .leq
        .iter()
        .map(|r| r.iter().map(|&v| v != 0).collect())
        .collect();
    validate_frame_with_labels(doc.n, &rows, doc.labels.clone())
}

pub fn biframe_to_doc(b: &Biframe) -> BiframeDoc {
    BiframeDoc {
        kind: "biframe".into(),
        plus: frame_to_doc(b.plus()),
        minus: frame_to_doc(b.minus()),
        main: frame_to_doc(b.main()),
        embed_plus: b.embed_plus().table().iter().map(|&v| v as usize).collect(),
        embed_minus: b.embed_minus().table().iter().map(|&v| v as usize).collect(),
    }
}

pub fn biframe_from_doc(doc: &BiframeDoc) -> Result<Biframe> {
    if doc.kind != "biframe" {
        return Err(Error::BadInput(format!(
            "expected kind \"biframe\", got {:?}",
            doc.kind
        )));
    }
    let plus = Arc::new(frame_from_doc(&doc.plus)?);
    let minus = Arc::new(frame_from_doc(&doc.minus)?);
    let main = Arc::new(frame_from_doc(&doc.main)?);
    let to_u16 = |v: &[usize]| -> Result<Vec<u16>> {
        v.iter()
            .map(|&x| u16::try_from(x).map_err(|_| Error::BadInput("embedding index too large".into())))
            .collect()
    };
    validate_biframe(
        plus,
        minus,
        main,
        to_u16(&doc.embed_plus)?,
        to_u16(&doc.embed_minus)?,
    )
}

pub fn bispace_to_doc(x: &FiniteBispace) -> BispaceDoc {
    BispaceDoc {
        kind: "bispace".into(),
        points: x.points(),
        opens_plus: x.opens_plus().to_vec(),
        opens_minus: x.opens_minus().to_vec(),
        labels: x.labels().map(|l| l.to_vec()),
    }
}

pub fn bispace_from_doc(doc: &BispaceDoc) -> Result<FiniteBispace> {
    if doc.kind != "bispace" {
        return Err(Error::BadInput(format!(
            "expected kind \"bispace\", got {:?}",
            doc.kind
        )));
    }
    FiniteBispace::with_labels(
        doc.points,
        doc.opens_plus.clone(),
        doc.opens_minus.clone(),
        doc.labels.clone(),
    )
}

pub fn congruence_to_doc(frame: &FiniteFrame, c: &Congruence) -> CongruenceDoc {
    CongruenceDoc {
        kind: "congruence".into(),
        frame: FrameRef::Inline(frame_to_doc(frame)),
        classes: c.classes(),
    }
}

/// Resolve a congruence document; `base` anchors relative frame paths.
pub fn congruence_from_doc(doc: &CongruenceDoc, base: Option<&Path>) -> Result<(FiniteFrame, Congruence)> {
    if doc.kind != "congruence" {
        return Err(Error::BadInput(format!(
            "expected kind \"congruence\", got {:?}",
            doc.kind
        )));
    }
    let frame = match &doc.frame {
        FrameRef::Inline(fd) => frame_from_doc(fd)?,
        FrameRef::Path(p) => {
            let path = match base {
                Some(b) => b.join(p),
                None => Path::new(p).to_path_buf(),
            };
            let fd: FrameDoc = read_json(&path)?;
            frame_from_doc(&fd)?
        }
    };
    let c = Congruence::validate(&frame, &doc.classes)?;
    Ok((frame, c))
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let data = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&data).map_err(|e| Error::Json(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let data = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Json(e.to_string()))?;
    std::fs::write(path, data + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Any of the four document kinds, for `check`-style entry points.
#[derive(Debug)]
pub enum AnyDoc {
    Frame(FrameDoc),
    Congruence(CongruenceDoc),
    Biframe(BiframeDoc),
    Bispace(BispaceDoc),
}

pub fn read_any(path: &Path) -> Result<AnyDoc> {
    let value: serde_json::Value = read_json(path)?;
    let kind = value
        .get("kind")
        .and_then(|k| k.as_str())
        .ok_or_else(|| Error::BadInput("document has no \"kind\" field".into()))?;
    fn parse<T: serde::de::DeserializeOwned>(v: serde_json::Value) -> Result<T> {
        serde_json::from_value(v).map_err(|e| Error::Json(e.to_string()))
    }
    match kind {
        "frame" => Ok(AnyDoc::Frame(parse(value)?)),
        "congruence" => Ok(AnyDoc::Congruence(parse(value)?)),
        "biframe" => Ok(AnyDoc::Biframe(parse(value)?)),
        "bispace" => Ok(AnyDoc::Bispace(parse(value)?)),
        other => Err(Error::BadInput(format!("unknown document kind {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biframe::fixtures::sierpinski;
    use crate::congruence::nabla;
    use crate::lattice::chain;

    #[test]
    fn frame_round_trip() {
        let c3 = chain(3);
        let doc = frame_to_doc(&c3);
        let back = frame_from_doc(&doc).unwrap();
        assert_eq!(c3, back);
    }

    #[test]
    fn biframe_round_trip() {
        let bs = sierpinski();
        let doc = biframe_to_doc(&bs);
        let json = serde_json::to_string(&doc).unwrap();
        let doc2: BiframeDoc = serde_json::from_str(&json).unwrap();
        let back = biframe_from_doc(&doc2).unwrap();
        assert_eq!(bs, back);
    }

    #[test]
    fn congruence_round_trip_and_validation() {
        let c3 = chain(3);
        let c = nabla(&c3, 1);
        let doc = congruence_to_doc(&c3, &c);
        let (_, back) = congruence_from_doc(&doc, None).unwrap();
        assert_eq!(c, back);

        // A non-congruence partition is rejected.
        let bad = CongruenceDoc {
            kind: "congruence".into(),
            frame: FrameRef::Inline(frame_to_doc(&c3)),
            classes: vec![vec![0, 2], vec![1]],
        };
        assert!(congruence_from_doc(&bad, None).is_err());
    }

    #[test]
    fn bispace_round_trip() {
        let x = FiniteBispace::new(2, vec![0, 0b10, 0b11], vec![0, 0b11]).unwrap();
        let doc = bispace_to_doc(&x);
        let back = bispace_from_doc(&doc).unwrap();
        assert_eq!(x, back);
    }
}
