//! Embedded stroke programs for the synthetic glyph classes.
//!
//! Each prototype is a set of polylines on the 140x140 canvas, (x, y) with y
//! pointing down. The 25 classes span every combination of headline extent
//! (full bar, partial bar, none) and spine position (right edge, middle,
//! none), with bodies that differ in direction profile and junction count.
//! Class names follow the romanized consonant order; the drawings are
//! representative stand-ins, not faithful letterforms.

pub(crate) struct Prototype {
    pub name: &'static str,
    pub strokes: &'static [&'static [(f64, f64)]],
}

const BAR_FULL: &[(f64, f64)] = &[(15.0, 18.0), (125.0, 18.0)];
const BAR_PART: &[(f64, f64)] = &[(15.0, 18.0), (75.0, 18.0)];
const SPINE_END: &[(f64, f64)] = &[(122.0, 18.0), (122.0, 122.0)];
const SPINE_MID: &[(f64, f64)] = &[(70.0, 18.0), (70.0, 122.0)];

pub(crate) const PROTOTYPES: [Prototype; 25] = [
    // full bar, end spine
    Prototype {
        name: "ka",
        strokes: &[BAR_FULL, SPINE_END, &[(122.0, 70.0), (30.0, 70.0)]],
    },
    Prototype {
        name: "kha",
        strokes: &[BAR_FULL, SPINE_END, &[(20.0, 25.0), (110.0, 118.0)]],
    },
    Prototype {
        name: "ga",
        strokes: &[
            BAR_FULL,
            SPINE_END,
            &[(25.0, 30.0), (60.0, 112.0), (95.0, 30.0)],
        ],
    },
    Prototype {
        name: "gha",
        strokes: &[
            BAR_FULL,
            SPINE_END,
            &[(30.0, 55.0), (95.0, 55.0)],
            &[(62.0, 35.0), (62.0, 78.0)],
        ],
    },
    Prototype {
        name: "nga",
        strokes: &[
            BAR_FULL,
            SPINE_END,
            &[(25.0, 30.0), (85.0, 55.0), (25.0, 85.0), (85.0, 112.0)],
        ],
    },
    // full bar, mid spine
    Prototype {
        name: "cha",
        strokes: &[BAR_FULL, SPINE_MID],
    },
    Prototype {
        name: "chha",
        strokes: &[
            BAR_FULL,
            SPINE_MID,
            &[(70.0, 122.0), (25.0, 122.0), (25.0, 85.0)],
        ],
    },
    Prototype {
        name: "ja",
        strokes: &[BAR_FULL, SPINE_MID, &[(70.0, 45.0), (118.0, 105.0)]],
    },
    Prototype {
        name: "jha",
        strokes: &[
            BAR_FULL,
            SPINE_MID,
            &[(30.0, 40.0), (108.0, 100.0)],
            &[(108.0, 40.0), (30.0, 100.0)],
        ],
    },
    // full bar, no spine
    Prototype {
        name: "nya",
        strokes: &[
            BAR_FULL,
            &[(35.0, 32.0), (35.0, 75.0), (105.0, 75.0), (105.0, 32.0)],
        ],
    },
    Prototype {
        name: "tta",
        strokes: &[
            BAR_FULL,
            &[(70.0, 28.0), (30.0, 105.0)],
            &[(70.0, 28.0), (110.0, 105.0)],
        ],
    },
    Prototype {
        name: "ttha",
        strokes: &[
            BAR_FULL,
            &[(25.0, 70.0), (115.0, 70.0)],
            &[(40.0, 95.0), (100.0, 120.0)],
        ],
    },
    Prototype {
        name: "dda",
        strokes: &[
            BAR_FULL,
            &[
                (70.0, 35.0),
                (95.0, 45.0),
                (105.0, 70.0),
                (95.0, 95.0),
                (70.0, 105.0),
                (45.0, 95.0),
                (35.0, 70.0),
                (45.0, 45.0),
                (70.0, 35.0),
            ],
        ],
    },
    // partial bar, end spine
    Prototype {
        name: "ddha",
        strokes: &[BAR_PART, SPINE_END, &[(15.0, 60.0), (122.0, 60.0)]],
    },
    Prototype {
        name: "nna",
        strokes: &[
            BAR_PART,
            SPINE_END,
            &[(20.0, 40.0), (50.0, 105.0), (80.0, 40.0)],
        ],
    },
    Prototype {
        name: "ta",
        strokes: &[
            BAR_PART,
            SPINE_END,
            &[
                (20.0, 35.0),
                (60.0, 35.0),
                (60.0, 75.0),
                (100.0, 75.0),
                (100.0, 115.0),
            ],
        ],
    },
    // partial bar, mid spine
    Prototype {
        name: "tha",
        strokes: &[
            BAR_PART,
            SPINE_MID,
            &[(70.0, 42.0), (40.0, 42.0), (40.0, 85.0), (70.0, 85.0)],
        ],
    },
    Prototype {
        name: "da",
        strokes: &[
            BAR_PART,
            SPINE_MID,
            &[(70.0, 35.0), (115.0, 80.0)],
            &[(70.0, 80.0), (115.0, 35.0)],
        ],
    },
    Prototype {
        name: "dha",
        strokes: &[BAR_PART, SPINE_MID, &[(20.0, 122.0), (120.0, 122.0)]],
    },
    // partial bar, no spine
    Prototype {
        name: "na",
        strokes: &[BAR_PART, &[(20.0, 30.0), (120.0, 120.0)]],
    },
    Prototype {
        name: "pa",
        strokes: &[
            BAR_PART,
            &[(25.0, 40.0), (45.0, 75.0), (75.0, 95.0), (115.0, 105.0)],
        ],
    },
    Prototype {
        name: "pha",
        strokes: &[
            BAR_PART,
            &[
                (20.0, 35.0),
                (45.0, 110.0),
                (70.0, 50.0),
                (95.0, 110.0),
                (120.0, 35.0),
            ],
        ],
    },
    // no bar
    Prototype {
        name: "ba",
        strokes: &[
            SPINE_END,
            &[(122.0, 55.0), (50.0, 55.0)],
            &[(122.0, 90.0), (70.0, 90.0)],
        ],
    },
    Prototype {
        name: "bha",
        strokes: &[
            SPINE_MID,
            &[(70.0, 50.0), (15.0, 50.0)],
            &[(70.0, 95.0), (125.0, 95.0)],
        ],
    },
    Prototype {
        name: "ma",
        strokes: &[
            &[(20.0, 25.0), (120.0, 120.0)],
            &[(120.0, 25.0), (20.0, 120.0)],
        ],
    },
];
