//! BioSemi BDF reader and writer.
//!
//! Layout: a 256-byte main header, 256 bytes of per-channel header fields
//! (stored field-major: all labels, then all transducers, ...), then data
//! records. Each record holds, channel after channel, `samples_per_record`
//! 24-bit little-endian two's-complement samples.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAGIC: [u8; 8] = [0xFF, b'B', b'I', b'O', b'S', b'E', b'M', b'I'];
pub const DIGITAL_LIMIT_MIN: i64 = -(1 << 23);
pub const DIGITAL_LIMIT_MAX: i64 = (1 << 23) - 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BdfChannel {
    pub label: String,
    pub transducer: String,
    pub physical_dim: String,
    pub physical_min: f64,
    pub physical_max: f64,
    pub digital_min: i64,
    pub digital_max: i64,
    pub prefilter: String,
    pub samples_per_record: usize,
}

impl BdfChannel {
    /// A channel with the usual BioSemi full-scale range and unit gain
    /// (one count per µV).
    pub fn new(label: impl Into<String>, samples_per_record: usize) -> Self {
        BdfChannel {
            label: label.into(),
            transducer: String::new(),
            physical_dim: "uV".into(),
            physical_min: DIGITAL_LIMIT_MIN as f64,
            physical_max: DIGITAL_LIMIT_MAX as f64,
            digital_min: DIGITAL_LIMIT_MIN,
            digital_max: DIGITAL_LIMIT_MAX,
            prefilter: String::new(),
            samples_per_record,
        }
    }

    pub fn gain(&self) -> f64 {
        (self.physical_max - self.physical_min) / (self.digital_max - self.digital_min) as f64
    }

    pub fn offset(&self) -> f64 {
        self.physical_min - self.gain() * self.digital_min as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BdfHeader {
    pub id_code: [u8; 8],
    pub subject_info: String,
    pub recording_info: String,
    pub start_date: String,
    pub start_time: String,
    pub reserved: String,
    pub num_records: usize,
    pub record_duration: f64,
    pub channels: Vec<BdfChannel>,
}

impl BdfHeader {
    pub fn new(channels: Vec<BdfChannel>, num_records: usize, record_duration: f64) -> Self {
        BdfHeader {
            id_code: MAGIC,
            subject_info: String::new(),
            recording_info: String::new(),
            start_date: "01.01.00".into(),
            start_time: "00.00.00".into(),
            reserved: "24BIT".into(),
            num_records,
            record_duration,
            channels,
        }
    }

    pub fn num_channels(&self) -> usize {
        self.channels.len()
    }

    pub fn header_bytes(&self) -> usize {
        256 * (self.channels.len() + 1)
    }

    /// Total samples per data record, summed over channels.
    pub fn record_samples(&self) -> usize {
        self.channels.iter().map(|c| c.samples_per_record).sum()
    }

    pub fn payload_bytes(&self) -> usize {
        3 * self.num_records * self.record_samples()
    }

    /// Sampling rate of channel `ch`.
    pub fn fs(&self, ch: usize) -> f64 {
        self.channels[ch].samples_per_record as f64 / self.record_duration
    }

    pub fn samples_per_channel(&self, ch: usize) -> usize {
        self.channels[ch].samples_per_record * self.num_records
    }
}

/// Cursor over a fixed-width ASCII header.
struct Fields<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Fields<'a> {
    fn take(&mut self, width: usize) -> &'a [u8] {
        let out = &self.bytes[self.pos..self.pos + width];
        self.pos += width;
        out
    }

    fn text(&mut self, width: usize) -> String {
        String::from_utf8_lossy(self.take(width)).trim().to_string()
    }

    fn number<T: std::str::FromStr>(&mut self, width: usize, field: &'static str) -> Result<T> {
        let raw = self.text(width);
        raw.parse().map_err(|_| Error::InvalidHeader { field, value: raw })
    }

    fn per_channel<T>(&mut self, ns: usize, mut f: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        (0..ns).map(|_| f(self)).collect()
    }
}

/// Parses the main and channel headers. Fails with `TruncatedPayload` if
/// the bytes end inside the header.
pub fn parse_header(bytes: &[u8]) -> Result<BdfHeader> {
    let probe = bytes.len().min(8);
    if probe == 0 || bytes[..probe] != MAGIC[..probe] {
        return Err(Error::BadMagic);
    }
    if bytes.len() < 256 {
        return Err(Error::TruncatedPayload { expected: 256, actual: bytes.len() });
    }
    let mut f = Fields { bytes, pos: 8 };
    let subject_info = f.text(80);
    let recording_info = f.text(80);
    let start_date = f.text(8);
    let start_time = f.text(8);
    let header_bytes: usize = f.number(8, "header_bytes")?;
    let reserved = f.text(44);
    let num_records: i64 = f.number(8, "num_records")?;
    let record_duration: f64 = f.number(8, "record_duration")?;
    let ns: usize = f.number(4, "num_channels")?;

    if num_records == -1 {
        return Err(Error::UnknownRecordCount);
    }
    if num_records < 1 {
        return Err(Error::InvalidHeader { field: "num_records", value: num_records.to_string() });
    }
    if ns < 1 {
        return Err(Error::InvalidHeader { field: "num_channels", value: ns.to_string() });
    }
    if !(record_duration > 0.0 && record_duration.is_finite()) {
        return Err(Error::InvalidHeader { field: "record_duration", value: record_duration.to_string() });
    }
    let expected_header = 256 * (ns + 1);
    if header_bytes != expected_header {
        return Err(Error::InvalidHeader { field: "header_bytes", value: header_bytes.to_string() });
    }
    if bytes.len() < expected_header {
        return Err(Error::TruncatedPayload { expected: expected_header, actual: bytes.len() });
    }

    let labels = f.per_channel(ns, |f| Ok(f.text(16)))?;
    let transducers = f.per_channel(ns, |f| Ok(f.text(80)))?;
    let dims = f.per_channel(ns, |f| Ok(f.text(8)))?;
    let pmin: Vec<f64> = f.per_channel(ns, |f| f.number(8, "physical_min"))?;
    let pmax: Vec<f64> = f.per_channel(ns, |f| f.number(8, "physical_max"))?;
    let dmin: Vec<i64> = f.per_channel(ns, |f| f.number(8, "digital_min"))?;
    let dmax: Vec<i64> = f.per_channel(ns, |f| f.number(8, "digital_max"))?;
    let prefilters = f.per_channel(ns, |f| Ok(f.text(80)))?;
    let spr: Vec<usize> = f.per_channel(ns, |f| f.number(8, "samples_per_record"))?;

    let mut channels = Vec::with_capacity(ns);
    for (i, label) in labels.into_iter().enumerate() {
        if dmin[i] >= dmax[i] || !(pmin[i] < pmax[i]) {
            return Err(Error::InvalidScaling { channel: i });
        }
        if spr[i] == 0 {
            return Err(Error::InvalidHeader { field: "samples_per_record", value: "0".into() });
        }
        channels.push(BdfChannel {
            label,
            transducer: transducers[i].clone(),
            physical_dim: dims[i].clone(),
            physical_min: pmin[i],
            physical_max: pmax[i],
            digital_min: dmin[i],
            digital_max: dmax[i],
            prefilter: prefilters[i].clone(),
            samples_per_record: spr[i],
        });
    }
    let mut id_code = [0u8; 8];
    id_code.copy_from_slice(&bytes[..8]);
    Ok(BdfHeader {
        id_code,
        subject_info,
        recording_info,
        start_date,
        start_time,
        reserved,
        num_records: num_records as usize,
        record_duration,
        channels,
    })
}

#[inline]
fn decode24(b: &[u8]) -> i32 {
    // sign-extend by placing the 24 bits at the top of an i32
    (i32::from_le_bytes([0, b[0], b[1], b[2]])) >> 8
}

#[inline]
fn encode24(v: i32) -> [u8; 3] {
    let b = v.to_le_bytes();
    [b[0], b[1], b[2]]
}

/// Parses a BDF file into its header and raw digital samples per channel.
pub fn parse_bdf_digital(bytes: &[u8]) -> Result<(BdfHeader, Vec<Vec<i32>>)> {
    let header = parse_header(bytes)?;
    let expected = header.header_bytes() + header.payload_bytes();
    if bytes.len() < expected {
        return Err(Error::TruncatedPayload { expected, actual: bytes.len() });
    }
    let mut data: Vec<Vec<i32>> = (0..header.num_channels())
        .map(|ch| Vec::with_capacity(header.samples_per_channel(ch)))
        .collect();
    let mut pos = header.header_bytes();
    for _ in 0..header.num_records {
        for (ch, c) in header.channels.iter().enumerate() {
            let chunk = &bytes[pos..pos + 3 * c.samples_per_record];
            data[ch].extend(chunk.chunks_exact(3).map(decode24));
            pos += chunk.len();
        }
    }
    Ok((header, data))
}

/// Parses a BDF file into its header and physical-unit samples per channel.
pub fn parse_bdf(bytes: &[u8]) -> Result<(BdfHeader, Vec<Vec<f64>>)> {
    let (header, digital) = parse_bdf_digital(bytes)?;
    let data = header
        .channels
        .iter()
        .zip(digital)
        .map(|(c, d)| {
            let (g, o) = (c.gain(), c.offset());
            d.into_iter().map(|v| g * v as f64 + o).collect()
        })
        .collect();
    Ok((header, data))
}

pub fn read_bdf_file(path: impl AsRef<Path>) -> Result<(BdfHeader, Vec<Vec<f64>>)> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::Io(e).in_file(path))?;
    parse_bdf(&bytes).map_err(|e| e.in_file(path))
}

fn put_text(out: &mut Vec<u8>, value: &str, width: usize, field: &'static str) -> Result<()> {
    if !value.is_ascii() {
        return Err(Error::InvalidHeader { field, value: value.into() });
    }
    if value.len() > width {
        return Err(Error::HeaderFieldOverflow { field, value: value.into() });
    }
    out.extend_from_slice(value.as_bytes());
    out.extend(std::iter::repeat_n(b' ', width - value.len()));
    Ok(())
}

/// Shortest decimal text for `v` that fits in `width` characters, dropping
/// fractional digits if needed.
fn fit_number(v: f64, width: usize, field: &'static str) -> Result<String> {
    let plain = format!("{v}");
    if plain.len() <= width {
        return Ok(plain);
    }
    for prec in (0..width).rev() {
        let s = format!("{v:.prec$}");
        if s.len() <= width {
            return Ok(s);
        }
    }
    Err(Error::HeaderFieldOverflow { field, value: plain })
}

/// Renders the header with values rounded to what the fixed-width fields
/// can carry, returning the bytes and the header as a reader will see it.
fn render_header(h: &BdfHeader) -> Result<(Vec<u8>, BdfHeader)> {
    let ns = h.num_channels();
    if ns == 0 {
        return Err(Error::InvalidHeader { field: "num_channels", value: "0".into() });
    }
    let mut out = Vec::with_capacity(h.header_bytes());
    out.extend_from_slice(&MAGIC);
    put_text(&mut out, &h.subject_info, 80, "subject_info")?;
    put_text(&mut out, &h.recording_info, 80, "recording_info")?;
    put_text(&mut out, &h.start_date, 8, "start_date")?;
    put_text(&mut out, &h.start_time, 8, "start_time")?;
    put_text(&mut out, &h.header_bytes().to_string(), 8, "header_bytes")?;
    put_text(&mut out, &h.reserved, 44, "reserved")?;
    put_text(&mut out, &h.num_records.to_string(), 8, "num_records")?;
    put_text(&mut out, &fit_number(h.record_duration, 8, "record_duration")?, 8, "record_duration")?;
    put_text(&mut out, &ns.to_string(), 4, "num_channels")?;

    let text_fields: [(fn(&BdfChannel) -> &str, usize, &'static str); 3] = [
        (|c| &c.label, 16, "label"),
        (|c| &c.transducer, 80, "transducer"),
        (|c| &c.physical_dim, 8, "physical_dim"),
    ];
    for (get, width, name) in text_fields {
        for c in &h.channels {
            put_text(&mut out, get(c), width, name)?;
        }
    }
    let number_fields: [(fn(&BdfChannel) -> f64, &'static str); 4] = [
        (|c| c.physical_min, "physical_min"),
        (|c| c.physical_max, "physical_max"),
        (|c| c.digital_min as f64, "digital_min"),
        (|c| c.digital_max as f64, "digital_max"),
    ];
    for (get, name) in number_fields {
        for c in &h.channels {
            put_text(&mut out, &fit_number(get(c), 8, name)?, 8, name)?;
        }
    }
    for c in &h.channels {
        put_text(&mut out, &c.prefilter, 80, "prefilter")?;
    }
    for c in &h.channels {
        put_text(&mut out, &c.samples_per_record.to_string(), 8, "samples_per_record")?;
    }
    for _ in 0..ns {
        put_text(&mut out, "", 32, "reserved")?;
    }
    let seen = parse_header(&out)?;
    Ok((out, seen))
}

fn check_shape<T>(h: &BdfHeader, data: &[Vec<T>]) -> Result<()> {
    if data.len() != h.num_channels() {
        return Err(Error::ShapeMismatch(format!(
            "{} data channels for {} header channels",
            data.len(),
            h.num_channels()
        )));
    }
    for (ch, d) in data.iter().enumerate() {
        if d.len() != h.samples_per_channel(ch) {
            return Err(Error::ShapeMismatch(format!(
                "channel {ch} has {} samples, header promises {}",
                d.len(),
                h.samples_per_channel(ch)
            )));
        }
    }
    Ok(())
}

fn write_records(h: &BdfHeader, mut out: Vec<u8>, data: &[Vec<i32>]) -> Vec<u8> {
    out.reserve(h.payload_bytes());
    for r in 0..h.num_records {
        for (c, d) in h.channels.iter().zip(data) {
            let spr = c.samples_per_record;
            for &v in &d[r * spr..(r + 1) * spr] {
                out.extend_from_slice(&encode24(v));
            }
        }
    }
    out
}

/// Serializes raw digital samples. Values must fit 24-bit signed storage.
pub fn write_bdf_digital(h: &BdfHeader, data: &[Vec<i32>]) -> Result<Vec<u8>> {
    check_shape(h, data)?;
    for (ch, d) in data.iter().enumerate() {
        if let Some((i, &v)) = d
            .iter()
            .enumerate()
            .find(|(_, &v)| !(DIGITAL_LIMIT_MIN..=DIGITAL_LIMIT_MAX).contains(&(v as i64)))
        {
            return Err(Error::ValueOutOfDigitalRange { channel: ch, sample: i, digital: v as i64 });
        }
    }
    let (out, _) = render_header(h)?;
    Ok(write_records(h, out, data))
}

/// Serializes physical-unit samples, quantizing with the channel scaling as
/// it will be read back from the written header.
pub fn write_bdf(h: &BdfHeader, data: &[Vec<f64>]) -> Result<Vec<u8>> {
    check_shape(h, data)?;
    let (out, seen) = render_header(h)?;
    let mut digital = Vec::with_capacity(data.len());
    for (ch, (c, d)) in seen.channels.iter().zip(data).enumerate() {
        let (g, o) = (c.gain(), c.offset());
        let mut row = Vec::with_capacity(d.len());
        for (i, &v) in d.iter().enumerate() {
            let q = ((v - o) / g).round();
            if !(q >= DIGITAL_LIMIT_MIN as f64 && q <= DIGITAL_LIMIT_MAX as f64) {
                let digital = if q.is_finite() { q as i64 } else { i64::MAX };
                return Err(Error::ValueOutOfDigitalRange { channel: ch, sample: i, digital });
            }
            row.push(q as i32);
        }
        digital.push(row);
    }
    Ok(write_records(h, out, &digital))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_header(ns: usize, spr: usize, records: usize) -> BdfHeader {
        BdfHeader::new((0..ns).map(|i| BdfChannel::new(format!("C{i}"), spr)).collect(), records, 1.0)
    }

    #[test]
    fn decodes_hand_built_samples() {
        let h = unit_header(1, 2, 1);
        let mut bytes = write_bdf_digital(&h, &[vec![0, 0]]).unwrap();
        let n = bytes.len();
        bytes[n - 6..].copy_from_slice(&[0x01, 0x00, 0x00, 0xFF, 0xFF, 0xFF]);
        let (_, data) = parse_bdf(&bytes).unwrap();
        assert_eq!(data[0], vec![1.0, -1.0]);
        assert_eq!(decode24(&[0x00, 0x00, 0x80]), -(1 << 23));
        assert_eq!(decode24(&[0xFF, 0xFF, 0x7F]), (1 << 23) - 1);
    }

    #[test]
    fn header_layout_offsets() {
        let h = unit_header(2, 4, 3);
        let bytes = write_bdf_digital(&h, &[vec![0; 12], vec![0; 12]]).unwrap();
        assert_eq!(bytes.len(), 768 + 3 * 24);
        assert_eq!(&bytes[..8], &MAGIC);
        assert_eq!(&bytes[184..192], b"768     ");
        assert_eq!(&bytes[236..244], b"3       ");
        assert_eq!(&bytes[252..256], b"2   ");
        // labels block follows the main header
        assert_eq!(&bytes[256..258], b"C0");
        assert_eq!(&bytes[272..274], b"C1");
    }

    #[test]
    fn channel_major_records() {
        let h = BdfHeader::new(vec![BdfChannel::new("A", 2), BdfChannel::new("B", 1)], 2, 1.0);
        let bytes = write_bdf_digital(&h, &[vec![1, 2, 3, 4], vec![-5, -6]]).unwrap();
        let payload = &bytes[768..];
        let vals: Vec<i32> = payload.chunks_exact(3).map(decode24).collect();
        assert_eq!(vals, vec![1, 2, -5, 3, 4, -6]);
        let (_, back) = parse_bdf_digital(&bytes).unwrap();
        assert_eq!(back, vec![vec![1, 2, 3, 4], vec![-5, -6]]);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(parse_bdf(&[0x00; 300]), Err(Error::BadMagic)));
        assert!(matches!(parse_bdf(&[]), Err(Error::BadMagic)));
        let h = unit_header(1, 4, 2);
        let bytes = write_bdf_digital(&h, &[vec![0; 8]]).unwrap();
        for cut in [4, 100, 300, bytes.len() - 1] {
            assert!(matches!(parse_bdf(&bytes[..cut]), Err(Error::TruncatedPayload { .. })), "cut {cut}");
        }
        let mut unknown = bytes.clone();
        unknown[236..244].copy_from_slice(b"-1      ");
        assert!(matches!(parse_bdf(&unknown), Err(Error::UnknownRecordCount)));
        let mut flat = bytes.clone();
        // digital_max := digital_min
        let dmin = flat[256 + 120..256 + 128].to_vec();
        flat[256 + 128..256 + 136].copy_from_slice(&dmin);
        assert!(matches!(parse_bdf(&flat), Err(Error::InvalidScaling { channel: 0 })));
    }

    #[test]
    fn write_rejects_out_of_range_and_bad_shape() {
        let h = unit_header(1, 1, 1);
        assert!(matches!(
            write_bdf(&h, &[vec![8_388_608.0]]),
            Err(Error::ValueOutOfDigitalRange { digital: 8_388_608, .. })
        ));
        assert!(matches!(write_bdf(&h, &[vec![f64::NAN]]), Err(Error::ValueOutOfDigitalRange { .. })));
        assert!(matches!(write_bdf(&h, &[vec![0.0, 1.0]]), Err(Error::ShapeMismatch(_))));
        let mut long = h.clone();
        long.channels[0].label = "x".repeat(17);
        assert!(matches!(write_bdf(&long, &[vec![0.0]]), Err(Error::HeaderFieldOverflow { .. })));
    }

    #[test]
    fn physical_round_trip_within_one_quantum() {
        let mut h = unit_header(2, 5, 2);
        for c in &mut h.channels {
            c.physical_min = -262_144.0;
            c.physical_max = 262_143.96875;
        }
        let data: Vec<Vec<f64>> = (0..2)
            .map(|ch| (0..10).map(|i| (i as f64 * 1.37 + ch as f64).sin() * 1000.0).collect())
            .collect();
        let bytes = write_bdf(&h, &data).unwrap();
        let (seen, back) = parse_bdf(&bytes).unwrap();
        for ch in 0..2 {
            let q = seen.channels[ch].gain();
            for (a, b) in data[ch].iter().zip(&back[ch]) {
                assert!((a - b).abs() <= q, "{a} vs {b}");
            }
        }
    }
}
