//! Representative lists of the known diffeomorphism classes in sizes 2 to 4.
//! Each class lists matrices that must share one orbit; different classes must
//! land in different orbits.

pub(crate) type ClassList = &'static [(&'static str, &'static [&'static str])];

pub(crate) const SIZE_2: ClassList = &[("A1", &["10\n01\n"]), ("A2", &["11\n01\n"])];

pub(crate) const SIZE_3: ClassList = &[
    ("a", &["110\n011\n001\n", "111\n011\n001\n"]),
    ("b", &["111\n010\n001\n"]),
    (
        "c",
        &[
            "100\n011\n001\n",
            "101\n011\n001\n",
            "101\n010\n001\n",
            "110\n010\n001\n",
        ],
    ),
    ("d", &["100\n010\n001\n"]),
];

pub(crate) const SIZE_4: ClassList = &[
    (
        "i",
        &["1100\n0111\n0010\n0001\n", "1111\n0111\n0010\n0001\n"],
    ),
    (
        "ii",
        &["1101\n0111\n0010\n0001\n", "1110\n0111\n0010\n0001\n"],
    ),
    (
        "iii",
        &[
            "1100\n0110\n0011\n0001\n",
            "1110\n0110\n0011\n0001\n",
            "1100\n0111\n0011\n0001\n",
            "1111\n0111\n0011\n0001\n",
        ],
    ),
    (
        "iv",
        &[
            "1101\n0110\n0011\n0001\n",
            "1111\n0110\n0011\n0001\n",
            "1101\n0111\n0011\n0001\n",
            "1110\n0111\n0011\n0001\n",
        ],
    ),
    (
        "v",
        &[
            "1110\n0100\n0011\n0001\n",
            "1110\n0101\n0011\n0001\n",
            "1111\n0101\n0011\n0001\n",
            "1110\n0101\n0010\n0001\n",
            "1111\n0101\n0010\n0001\n",
            "1111\n0100\n0011\n0001\n",
            "1101\n0110\n0010\n0001\n",
            "1111\n0110\n0010\n0001\n",
        ],
    ),
    ("vi", &["1111\n0100\n0010\n0001\n"]),
    (
        "vii",
        &[
            "1001\n0110\n0010\n0001\n",
            "1001\n0111\n0010\n0001\n",
            "1010\n0101\n0010\n0001\n",
            "1011\n0101\n0010\n0001\n",
            "1010\n0111\n0010\n0001\n",
            "1011\n0110\n0010\n0001\n",
            "1100\n0100\n0011\n0001\n",
            "1101\n0100\n0011\n0001\n",
        ],
    ),
    (
        "viii",
        &[
            "1000\n0111\n0010\n0001\n",
            "1011\n0100\n0010\n0001\n",
            "1011\n0111\n0010\n0001\n",
            "1101\n0100\n0010\n0001\n",
            "1110\n0100\n0010\n0001\n",
        ],
    ),
    (
        "ix",
        &[
            "1000\n0110\n0011\n0001\n",
            "1000\n0111\n0011\n0001\n",
            "1010\n0100\n0011\n0001\n",
            "1011\n0100\n0011\n0001\n",
            "1010\n0110\n0011\n0001\n",
            "1011\n0111\n0011\n0001\n",
            "1100\n0101\n0010\n0001\n",
            "1100\n0110\n0010\n0001\n",
            "1101\n0101\n0010\n0001\n",
            "1110\n0110\n0010\n0001\n",
        ],
    ),
    (
        "x",
        &[
            "1001\n0110\n0011\n0001\n",
            "1001\n0111\n0011\n0001\n",
            "1010\n0101\n0011\n0001\n",
            "1011\n0101\n0011\n0001\n",
            "1010\n0111\n0011\n0001\n",
            "1011\n0110\n0011\n0001\n",
            "1100\n0101\n0011\n0001\n",
            "1101\n0101\n0011\n0001\n",
        ],
    ),
    (
        "xi",
        &[
            "1000\n0100\n0011\n0001\n",
            "1000\n0101\n0010\n0001\n",
            "1000\n0101\n0011\n0001\n",
            "1001\n0100\n0010\n0001\n",
            "1001\n0100\n0011\n0001\n",
            "1001\n0101\n0010\n0001\n",
            "1001\n0101\n0011\n0001\n",
            "1000\n0110\n0010\n0001\n",
            "1100\n0100\n0010\n0001\n",
            "1010\n0100\n0010\n0001\n",
            "1010\n0110\n0010\n0001\n",
        ],
    ),
    ("xii", &["1000\n0100\n0010\n0001\n"]),
];

pub(crate) fn for_size(n: usize) -> Option<ClassList> {
    match n {
        2 => Some(SIZE_2),
        3 => Some(SIZE_3),
        4 => Some(SIZE_4),
        _ => None,
    }
}
