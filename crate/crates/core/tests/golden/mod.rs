//! The English stimulus table as printed, for golden comparisons.

#![allow(dead_code)]

pub fn split(list: &str) -> Vec<&str> {
    list.split(',').map(str::trim).collect()
}

pub const EN: [(&str, &str); 6] = [
    ("flowers", "clover, orchid, rose, daffodil, lilac, tulip, daisy, lily, violet, magnolia"),
    ("insects", "ant, flea, spider, bedbug, fly, tarantula, bee, cockroach, mosquito, hornet"),
    (
        "instruments",
        "bagpipe, cello, guitar, lute, trombone, banjo, clarinet, harmonica, mandolin, trumpet, bassoon, drum, harp, oboe, tuba, bell, fiddle, harpsichord, piano, viola, bongo, flute, horn, saxophone, violin",
    ),
    (
        "weapons",
        "arrow, club, gun, missile, spear, axe, dagger, harpoon, pistol, sword, blade, dynamite, hatchet, rifle, tank, bomb, firearm, knife, shotgun, teargas, cannon, grenade, mace, slingshot, whip",
    ),
    (
        "pleasant",
        "caress, freedom, health, love, peace, cheer, friend, heaven, loyal, pleasure, diamond, gentle, honest, lucky, rainbow, diploma, gift, honor, miracle, sunrise, family, happy, laughter, paradise, vacation",
    ),
    (
        "unpleasant",
        "abuse, crash, filth, murder, sickness, accident, death, grief, poison, stink, assault, disaster, hatred, pollute, tragedy, divorce, jail, poverty, ugly, cancer, kill, rotten, vomit, agony, prison",
    ),
];

pub const EN_SIZES: [usize; 6] = [10, 10, 25, 25, 25, 25];
