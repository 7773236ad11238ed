// M_24 generator image tables, relative to the lexicode point labelling.
// Derived offline as automorphisms of the octad system; certified at load
// by octad preservation and the order check in `m24()`.
const fn m24_generator_images() -> [[u8; 24]; 2] {
    [
        [
            12, 17, 4, 1, 13, 3, 7, 16, 10, 6, 23, 5, 20, 14, 8, 15, 2, 22, 0, 11, 19, 21, 18, 9,
        ],
        [
            13, 12, 18, 17, 19, 15, 14, 16, 2, 10, 1, 8, 23, 6, 21, 7, 3, 9, 0, 11, 20, 4, 22, 5,
        ],
    ]
}
