"""Frozen benchmark minima. Generated by tools/verify_minima.py;
do not edit by hand."""

FROZEN_MINIMA = {
    'Ackley5': (
        4.440892098500626e-16,
        [
            [0.0, 0.0, 0.0, 0.0, 0.0],
        ],
    ),
    'Ackley10': (
        4.440892098500626e-16,
        [
            [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        ],
    ),
    'Branin': (
        0.39788735772973816,
        [
            [-3.141592653589793, 12.275],
            [3.141592653589793, 2.275],
            [9.424778011518375, 2.4750003131467406],
        ],
    ),
    'Eggholder': (
        -959.6406627208507,
        [
            [512.0, 404.23180508050893],
        ],
    ),
    'GoldsteinPrice': (
        2.999999999999936,
        [
            [0.0, -1.0],
        ],
    ),
    'Hartmann3': (
        -3.8627797873326624,
        [
            [0.11461317528899068, 0.5556486922361265, 0.8525466237105767],
        ],
    ),
    'Hartmann6': (
        -3.32236801141551,
        [
            [0.20168981037756276, 0.15001089841655146, 0.4768740086192017, 0.27533234168978143, 0.31165147792264025, 0.6573003749352716],
        ],
    ),
    'Michalewicz5': (
        -4.687658179088148,
        [
            [2.202905520142923, 1.570796326778263, 1.2849915705136004, 1.9230584698297473, 1.7204697725280094],
        ],
    ),
    'Michalewicz10': (
        -9.660151715641343,
        [
            [2.202905520142923, 1.570796326778263, 1.2849915705136004, 1.9230584698297473, 1.7204697725280094, 1.5707963267772478, 1.4544139713242783, 1.7560865209214074, 1.6557174167795692, 1.5707963267773901],
        ],
    ),
    'Rosenbrock7': (
        0.0,
        [
            [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
        ],
    ),
    'Rosenbrock10': (
        0.0,
        [
            [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
        ],
    ),
    'SixHumpCamel': (
        -1.0316284534898774,
        [
            [0.08983079153253316, -0.712657384052586],
            [-0.08983080164463182, 0.7126573752415533],
        ],
    ),
    'StyblinskiTang5': (
        -195.8308285188571,
        [
            [-2.903534027520566, -2.903534027520566, -2.903534027520566, -2.903534027520566, -2.903534027520566],
        ],
    ),
    'StyblinskiTang7': (
        -274.16315992639994,
        [
            [-2.903534027520566, -2.903534027520566, -2.903534027520566, -2.903534027520566, -2.903534027520566, -2.903534027520566, -2.903534027520566],
        ],
    ),
    'StyblinskiTang10': (
        -391.6616570377142,
        [
            [-2.903534027520566, -2.903534027520566, -2.903534027520566, -2.903534027520566, -2.903534027520566, -2.903534027520566, -2.903534027520566, -2.903534027520566, -2.903534027520566, -2.903534027520566],
        ],
    ),
}
