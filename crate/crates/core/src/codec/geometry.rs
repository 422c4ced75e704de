//! Text form of geometric bases.
//!
//! ```text
//! point    := "(" real ", " real ", " real ")"
//! curve    := "[" Kind ", " field (", " field)* "]"
//! loop     := "{CurveLoop" (", " curve)* "}"
//! profile  := "Profile" (", " loop)*
//! list     := "<" [item ("; " item)*] ">"
//! ```
//!
//! Arcs are written without their plane and read back in world XY.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use super::number::{format_real, parse_real};
use super::CodecError;
use crate::geom::{
    Arc, Curve, CurveLoop, CylindricalHelix, Ellipse, GeometricBase, HermiteSpline, Line,
    NurbsSpline, Point3, Profile,
};

pub fn serialize_geometry(base: &GeometricBase) -> String {
    let mut out = String::new();
    match base {
        GeometricBase::Point(p) => write_point(&mut out, *p),
        GeometricBase::Curve(c) => write_curve(&mut out, c),
        GeometricBase::Loop(l) => write_loop(&mut out, l),
        GeometricBase::Profile(p) => {
            out.push_str("Profile");
            for l in &p.loops {
                out.push_str(", ");
                write_loop(&mut out, l);
            }
        }
    }
    out
}

fn write_point(out: &mut String, p: Point3) {
    let _ = write!(
        out,
        "({}, {}, {})",
        format_real(p.x),
        format_real(p.y),
        format_real(p.z)
    );
}

fn write_reals(out: &mut String, xs: &[f64]) {
    out.push('<');
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            out.push_str("; ");
        }
        out.push_str(&format_real(*x));
    }
    out.push('>');
}

fn write_points(out: &mut String, ps: &[Point3]) {
    out.push('<');
    for (i, p) in ps.iter().enumerate() {
        if i > 0 {
            out.push_str("; ");
        }
        write_point(out, *p);
    }
    out.push('>');
}

fn write_loop(out: &mut String, l: &CurveLoop) {
    out.push_str("{CurveLoop");
    for c in &l.curves {
        out.push_str(", ");
        write_curve(out, c);
    }
    out.push('}');
}

fn write_curve(out: &mut String, c: &Curve) {
    out.push('[');
    out.push_str(c.kind_name());
    let sep = |out: &mut String| out.push_str(", ");
    let real = |out: &mut String, x: f64| {
        out.push_str(", ");
        out.push_str(&format_real(x));
    };
    match c {
        Curve::Line(l) => {
            sep(out);
            write_point(out, l.end1);
            sep(out);
            write_point(out, l.end2);
        }
        Curve::Arc(a) => {
            sep(out);
            write_point(out, a.center());
            real(out, a.radius);
            real(out, a.start_angle);
            real(out, a.end_angle);
        }
        Curve::Helix(h) => {
            sep(out);
            write_point(out, h.base);
            real(out, h.radius);
            sep(out);
            write_point(out, h.x_vector);
            sep(out);
            write_point(out, h.z_vector);
            real(out, h.pitch);
            real(out, h.start_angle);
            real(out, h.end_angle);
        }
        Curve::Ellipse(e) => {
            sep(out);
            write_point(out, e.center);
            real(out, e.x_radius);
            real(out, e.y_radius);
            sep(out);
            write_point(out, e.x_axis);
            sep(out);
            write_point(out, e.y_axis);
            real(out, e.start_param);
            real(out, e.end_param);
        }
        Curve::Nurbs(n) => {
            let _ = write!(out, ", {}", n.degree);
            sep(out);
            write_reals(out, &n.knots);
            sep(out);
            write_points(out, &n.control_points);
            sep(out);
            write_reals(out, &n.weights);
        }
        Curve::Hermite(h) => {
            sep(out);
            write_points(out, &h.control_points);
            out.push_str(if h.periodic { ", true" } else { ", false" });
            sep(out);
            write_points(out, h.tangents.as_deref().unwrap_or(&[]));
        }
    }
    out.push(']');
}

/// Parses and validates a geometric base.
pub fn parse_geometry(s: &str) -> Result<GeometricBase, CodecError> {
    let mut cur = Cursor { src: s, pos: 0 };
    cur.skip_ws();
    let base = match cur.peek() {
        Some(b'(') => GeometricBase::Point(cur.point()?),
        Some(b'[') => GeometricBase::Curve(cur.curve()?),
        Some(b'{') => GeometricBase::Loop(cur.curve_loop()?),
        Some(_) => {
            let at = cur.pos;
            let tag = cur.ident();
            if tag != "Profile" {
                return Err(CodecError::UnknownKind {
                    offset: at,
                    tag: tag.to_string(),
                });
            }
            let mut loops = Vec::new();
            while cur.eat(b',') {
                cur.skip_ws();
                loops.push(cur.curve_loop()?);
            }
            GeometricBase::Profile(Profile { loops })
        }
        None => return Err(cur.expected("geometry")),
    };
    cur.skip_ws();
    if cur.pos != s.len() {
        return Err(cur.expected("end of geometry"));
    }
    base.validate()?;
    Ok(base)
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn bytes(&self) -> &'a [u8] {
        self.src.as_bytes()
    }

    fn peek(&self) -> Option<u8> {
        self.bytes().get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expected(&self, what: &'static str) -> CodecError {
        CodecError::Syntax {
            offset: self.pos,
            expected: what,
        }
    }

    /// Consumes `b` (after optional whitespace) if it is next.
    fn eat(&mut self, b: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8, what: &'static str) -> Result<(), CodecError> {
        if self.eat(b) {
            self.skip_ws();
            Ok(())
        } else {
            Err(self.expected(what))
        }
    }

    fn ident(&mut self) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn real(&mut self) -> Result<f64, CodecError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|b| b.is_ascii_digit() || matches!(b, b'+' | b'-' | b'.' | b'e' | b'E'))
        {
            self.pos += 1;
        }
        let text = &self.src[start..self.pos];
        if text.is_empty() {
            return Err(self.expected("number"));
        }
        parse_real(text).ok_or_else(|| CodecError::Number {
            offset: start,
            text: text.to_string(),
        })
    }

    fn int(&mut self) -> Result<usize, CodecError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| CodecError::Number {
                offset: start,
                text: self.src[start..self.pos].to_string(),
            })
    }

    fn boolean(&mut self) -> Result<bool, CodecError> {
        self.skip_ws();
        match self.ident() {
            "true" | "True" => Ok(true),
            "false" | "False" => Ok(false),
            _ => Err(self.expected("true or false")),
        }
    }

    fn point(&mut self) -> Result<Point3, CodecError> {
        self.expect(b'(', "'('")?;
        let x = self.real()?;
        self.expect(b',', "',' between coordinates")?;
        let y = self.real()?;
        self.expect(b',', "',' between coordinates")?;
        let z = self.real()?;
        self.expect(b')', "')'")?;
        Ok(Point3::new(x, y, z))
    }

    fn list<T>(
        &mut self,
        mut item: impl FnMut(&mut Self) -> Result<T, CodecError>,
    ) -> Result<Vec<T>, CodecError> {
        self.expect(b'<', "'<'")?;
        let mut out = Vec::new();
        if self.eat(b'>') {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(b'>') {
                return Ok(out);
            }
            self.expect(b';', "';' or '>'")?;
        }
    }

    /// Separator before field `index` of a `total`-field curve.
    fn field_sep(
        &mut self,
        kind: &'static str,
        index: usize,
        total: usize,
    ) -> Result<(), CodecError> {
        self.skip_ws();
        if self.peek() == Some(b']') {
            return Err(CodecError::Arity {
                offset: self.pos,
                kind,
                expected: total,
                found: index,
            });
        }
        self.expect(b',', "','")
    }

    fn close_curve(&mut self, kind: &'static str, total: usize) -> Result<(), CodecError> {
        if self.eat(b']') {
            return Ok(());
        }
        let at = self.pos;
        if self.peek() == Some(b',') {
            return Err(CodecError::Arity {
                offset: at,
                kind,
                expected: total,
                found: total + self.count_extra_fields(),
            });
        }
        Err(self.expected("']'"))
    }

    /// Counts the remaining top-level fields before the closing `]`.
    fn count_extra_fields(&self) -> usize {
        let mut depth = 0usize;
        let mut extra = 0;
        for &b in &self.bytes()[self.pos..] {
            match b {
                b'(' | b'[' | b'{' | b'<' => depth += 1,
                b')' | b'}' | b'>' => depth = depth.saturating_sub(1),
                b']' if depth == 0 => break,
                b']' => depth -= 1,
                b',' if depth == 0 => extra += 1,
                _ => {}
            }
        }
        extra
    }

    fn curve(&mut self) -> Result<Curve, CodecError> {
        self.expect(b'[', "'['")?;
        let at = self.pos;
        let tag = self.ident();
        let (kind, total): (&'static str, usize) = match tag {
            "Line" => ("Line", 2),
            "Arc" => ("Arc", 4),
            "CylindricalHelix" => ("CylindricalHelix", 7),
            "Ellipse" => ("Ellipse", 7),
            "NurbsSpline" => ("NurbsSpline", 4),
            "HermiteSpline" => ("HermiteSpline", 3),
            _ => {
                return Err(CodecError::UnknownKind {
                    offset: at,
                    tag: tag.to_string(),
                })
            }
        };
        let mut index = 0;
        let mut next = |c: &mut Self| {
            let r = c.field_sep(kind, index, total);
            index += 1;
            r
        };
        let curve = match kind {
            "Line" => {
                next(self)?;
                let end1 = self.point()?;
                next(self)?;
                let end2 = self.point()?;
                Curve::Line(Line { end1, end2 })
            }
            "Arc" => {
                next(self)?;
                let center = self.point()?;
                next(self)?;
                let radius = self.real()?;
                next(self)?;
                let start = self.real()?;
                next(self)?;
                let end = self.real()?;
                Curve::Arc(Arc::new(center, radius, start, end))
            }
            "CylindricalHelix" => {
                next(self)?;
                let base = self.point()?;
                next(self)?;
                let radius = self.real()?;
                next(self)?;
                let x_vector = self.point()?;
                next(self)?;
                let z_vector = self.point()?;
                next(self)?;
                let pitch = self.real()?;
                next(self)?;
                let start_angle = self.real()?;
                next(self)?;
                let end_angle = self.real()?;
                Curve::Helix(CylindricalHelix {
                    base,
                    radius,
                    x_vector,
                    z_vector,
                    pitch,
                    start_angle,
                    end_angle,
                })
            }
            "Ellipse" => {
                next(self)?;
                let center = self.point()?;
                next(self)?;
                let x_radius = self.real()?;
                next(self)?;
                let y_radius = self.real()?;
                next(self)?;
                let x_axis = self.point()?;
                next(self)?;
                let y_axis = self.point()?;
                next(self)?;
                let start_param = self.real()?;
                next(self)?;
                let end_param = self.real()?;
                Curve::Ellipse(Ellipse {
                    center,
                    x_radius,
                    y_radius,
                    x_axis,
                    y_axis,
                    start_param,
                    end_param,
                })
            }
            "NurbsSpline" => {
                next(self)?;
                let degree = self.int()?;
                next(self)?;
                let knots = self.list(Self::real)?;
                next(self)?;
                let control_points = self.list(Self::point)?;
                next(self)?;
                let weights = self.list(Self::real)?;
                Curve::Nurbs(NurbsSpline {
                    degree,
                    knots,
                    control_points,
                    weights,
                })
            }
            _ => {
                next(self)?;
                let control_points = self.list(Self::point)?;
                next(self)?;
                let periodic = self.boolean()?;
                next(self)?;
                let tangents = self.list(Self::point)?;
                Curve::Hermite(HermiteSpline {
                    control_points,
                    periodic,
                    tangents: (!tangents.is_empty()).then_some(tangents),
                })
            }
        };
        self.close_curve(kind, total)?;
        Ok(curve)
    }

    fn curve_loop(&mut self) -> Result<CurveLoop, CodecError> {
        self.expect(b'{', "'{'")?;
        let at = self.pos;
        let tag = self.ident();
        if tag != "CurveLoop" {
            return Err(CodecError::UnknownKind {
                offset: at,
                tag: tag.to_string(),
            });
        }
        let mut curves = Vec::new();
        while self.eat(b',') {
            self.skip_ws();
            curves.push(self.curve()?);
        }
        self.expect(b'}', "'}'")?;
        Ok(CurveLoop { curves })
    }
}
