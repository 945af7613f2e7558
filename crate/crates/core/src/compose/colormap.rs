pub type Rgb = [u8; 3];

/// 256-entry HSV colormap: entry `i` has hue `i/256` at full saturation and value.
pub fn hsv_lut() -> [Rgb; 256] {
    let mut lut = [[0u8; 3]; 256];
    for (i, entry) in lut.iter_mut().enumerate() {
        let h6 = i as f64 / 256.0 * 6.0;
        let sector = h6.floor();
        let f = h6 - sector;
        let (q, t) = (1.0 - f, f);
        let (r, g, b) = match sector as u8 {
            0 => (1.0, t, 0.0),
            1 => (q, 1.0, 0.0),
            2 => (0.0, 1.0, t),
            3 => (0.0, q, 1.0),
            4 => (t, 0.0, 1.0),
            _ => (1.0, 0.0, q),
        };
        let to8 = |x: f64| (x * 255.0).round() as u8;
        *entry = [to8(r), to8(g), to8(b)];
    }
    lut
}

pub fn grayscale_lut() -> [Rgb; 256] {
    std::array::from_fn(|i| [i as u8; 3])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn hsv_entries() {
        let lut = hsv_lut();
        assert_eq!(lut[0], [255, 0, 0]);
        assert_eq!(lut[128], [0, 255, 255]);
        // sector 5, f = 5.9765625 - 5: b = round(255 * (1 - f)) = 6
        assert_eq!(lut[255], [255, 0, 6]);
    }

    #[test]
    fn luts_are_injective() {
        assert_eq!(hsv_lut().iter().collect::<HashSet<_>>().len(), 256);
        assert_eq!(grayscale_lut().iter().collect::<HashSet<_>>().len(), 256);
    }

    #[test]
    fn hsv_luma_is_not_monotone() {
        let luma = |p: &Rgb| 0.299 * f64::from(p[0]) + 0.587 * f64::from(p[1]) + 0.114 * f64::from(p[2]);
        let l: Vec<f64> = hsv_lut().iter().map(luma).collect();
        assert!(l.windows(2).any(|w| w[1] > w[0]));
        assert!(l.windows(2).any(|w| w[1] < w[0]));
    }
}
