//! Published unsensed counts for closed surfaces, as `(genus, edges, count)`.
//!
//! Only nonzero entries are listed; a missing `(genus, edges)` pair inside
//! the covered range means zero.

/// Orientable surfaces, genus 1 to 10, up to 20 edges.
pub const ORIENTABLE: &[(u32, u64, &str)] = &[
    (1, 2, "1"),
    (1, 3, "6"),
    (1, 4, "40"),
    (1, 5, "320"),
    (1, 6, "2946"),
    (1, 7, "29364"),
    (1, 8, "309558"),
    (1, 9, "3365108"),
    (1, 10, "37246245"),
    (1, 11, "416751008"),
    (1, 12, "4696232371"),
    (1, 13, "53186743416"),
    (1, 14, "604690121555"),
    (1, 15, "6896534910612"),
    (1, 16, "78867385697513"),
    (1, 17, "904046279771682"),
    (1, 18, "10384916465797240"),
    (1, 19, "119522063788612992"),
    (1, 20, "1378014272286250059"),
    (2, 4, "4"),
    (2, 5, "76"),
    (2, 6, "1395"),
    (2, 7, "24950"),
    (2, 8, "427336"),
    (2, 9, "6987100"),
    (2, 10, "109761827"),
    (2, 11, "1668376886"),
    (2, 12, "24689351504"),
    (2, 13, "357467967214"),
    (2, 14, "5083309341304"),
    (2, 15, "71209097157108"),
    (2, 16, "984963603696282"),
    (2, 17, "13477371260785608"),
    (2, 18, "182698708325667710"),
    (2, 19, "2456600457435363198"),
    (2, 20, "32796863046711248526"),
    (3, 6, "82"),
    (3, 7, "4348"),
    (3, 8, "160050"),
    (3, 9, "4696504"),
    (3, 10, "118353618"),
    (3, 11, "2675297588"),
    (3, 12, "55758114082"),
    (3, 13, "1091344752470"),
    (3, 14, "20318440463052"),
    (3, 15, "363171011546210"),
    (3, 16, "6275111078422480"),
    (3, 17, "105369657960443204"),
    (3, 18, "1726590417107274316"),
    (3, 19, "27699670730854989616"),
    (3, 20, "436246336648672487876"),
    (4, 8, "7258"),
    (4, 9, "688976"),
    (4, 10, "37466297"),
    (4, 11, "1512650776"),
    (4, 12, "50355225387"),
    (4, 13, "1461269893538"),
    (4, 14, "38236656513725"),
    (4, 15, "922552326544030"),
    (4, 16, "20847359639841664"),
    (4, 17, "446290728182323620"),
    (4, 18, "9129236228868478458"),
    (4, 19, "179639607187998993180"),
    (4, 20, "3418366706444416598777"),
    (5, 10, "1491629"),
    (5, 11, "195728778"),
    (5, 12, "14019733828"),
    (5, 13, "724646387874"),
    (5, 14, "30220873171570"),
    (5, 15, "1079253898643492"),
    (5, 16, "34231899372185491"),
    (5, 17, "988157793188200998"),
    (5, 18, "26412878913430197293"),
    (5, 19, "662133032168309300424"),
    (5, 20, "15719783014093104131694"),
    (6, 12, "506855279"),
    (6, 13, "84930743344"),
    (6, 14, "7601322881752"),
    (6, 15, "482475325333252"),
    (6, 16, "24347701836204379"),
    (6, 17, "1038820801135250668"),
    (6, 18, "38928478953655850016"),
    (6, 19, "1314623638623845390906"),
    (6, 20, "40749347642026348171659"),
    (7, 14, "254118439668"),
    (7, 15, "52148049818864"),
    (7, 16, "5634797561708385"),
    (7, 17, "426497331688178676"),
    (7, 18, "25388940147173859412"),
    (7, 19, "1265623233919838264624"),
    (7, 20, "54940200059090328012148"),
    (8, 16, "176377605783906"),
    (8, 17, "43058445711817178"),
    (8, 18, "5477393987229533288"),
    (8, 19, "483573171728920541590"),
    (8, 20, "33299663456795126129156"),
    (9, 18, "162019808170348933"),
    (9, 19, "46037869248765236030"),
    (9, 20, "6762460437287955976080"),
    (10, 20, "190375587419231088550"),
];

/// Non-orientable surfaces, genus 1 to 13, up to 14 edges.
pub const NON_ORIENTABLE: &[(u32, u64, &str)] = &[
    (1, 1, "1"),
    (1, 2, "4"),
    (1, 3, "19"),
    (1, 4, "106"),
    (1, 5, "709"),
    (1, 6, "5356"),
    (1, 7, "44558"),
    (1, 8, "397146"),
    (1, 9, "3716039"),
    (1, 10, "35967272"),
    (1, 11, "356784008"),
    (1, 12, "3605014966"),
    (1, 13, "36955965852"),
    (1, 14, "383320824698"),
    (2, 2, "2"),
    (2, 3, "16"),
    (2, 4, "137"),
    (2, 5, "1254"),
    (2, 6, "12597"),
    (2, 7, "133518"),
    (2, 8, "1464725"),
    (2, 9, "16373700"),
    (2, 10, "185086459"),
    (2, 11, "2106417804"),
    (2, 12, "24081813881"),
    (2, 13, "276231542440"),
    (2, 14, "3176840637522"),
    (3, 3, "8"),
    (3, 4, "128"),
    (3, 5, "1890"),
    (3, 6, "27036"),
    (3, 7, "379491"),
    (3, 8, "5229092"),
    (3, 9, "70805740"),
    (3, 10, "944106760"),
    (3, 11, "12426068215"),
    (3, 12, "161793730426"),
    (3, 13, "2087922762430"),
    (3, 14, "26745380615078"),
    (4, 4, "47"),
    (4, 5, "1372"),
    (4, 6, "31007"),
    (4, 7, "611322"),
    (4, 8, "11017122"),
    (4, 9, "186044902"),
    (4, 10, "2992773591"),
    (4, 11, "46378655568"),
    (4, 12, "697928466684"),
    (4, 13, "10257901689164"),
    (4, 14, "147883893647230"),
    (5, 5, "473"),
    (5, 6, "22556"),
    (5, 7, "704066"),
    (5, 8, "17691240"),
    (5, 9, "387965547"),
    (5, 10, "7743850792"),
    (5, 11, "144265686318"),
    (5, 12, "2549632137634"),
    (5, 13, "43225637985830"),
    (5, 14, "708619408979790"),
    (6, 6, "7190"),
    (6, 7, "469632"),
    (6, 8, "18521632"),
    (6, 9, "563764626"),
    (6, 10, "14578260141"),
    (6, 11, "336572753272"),
    (6, 12, "7146006383642"),
    (6, 13, "142229030736882"),
    (6, 14, "2688967762932621"),
    (7, 7, "144904"),
    (7, 8, "11990766"),
    (7, 9, "571333104"),
    (7, 10, "20460879142"),
    (7, 11, "611002852755"),
    (7, 12, "16057491913346"),
    (7, 13, "383591381459308"),
    (7, 14, "8507419863898968"),
    (8, 8, "3534490"),
    (8, 9, "352456980"),
    (8, 10, "19724988666"),
    (8, 11, "814875498464"),
    (8, 12, "27678691047563"),
    (8, 13, "817987730593078"),
    (8, 14, "21764920947291140"),
    (9, 9, "100895667"),
    (9, 10, "11802591792"),
    (9, 11, "761046274191"),
    (9, 12, "35728218734494"),
    (9, 13, "1363656535674147"),
    (9, 14, "44859920849412082"),
    (10, 10, "3276228298"),
    (10, 11, "441064161280"),
    (10, 12, "32289907002323"),
    (10, 13, "1702134963077638"),
    (10, 14, "72275063245968670"),
    (11, 11, "119465644032"),
    (11, 12, "18241550095386"),
    (11, 13, "1498266227902654"),
    (11, 14, "87804887825945334"),
    (12, 12, "4827606232542"),
    (12, 13, "826272319923692"),
    (12, 14, "75393018976649179"),
    (13, 13, "214282994249825"),
    (13, 14, "40709834082394876"),
];

/// Largest edge count listed for each orientability.
pub const ORIENTABLE_MAX_EDGES: u64 = 20;
pub const NON_ORIENTABLE_MAX_EDGES: u64 = 14;

/// The listed count, zero for unlisted pairs in range, `None` out of range.
pub fn lookup(orientable: bool, genus: u32, edges: u64) -> Option<&'static str> {
    let (rows, max_edges, max_genus) =
        if orientable { (ORIENTABLE, ORIENTABLE_MAX_EDGES, 10) } else { (NON_ORIENTABLE, NON_ORIENTABLE_MAX_EDGES, 13) };
    if genus == 0 || genus > max_genus || edges == 0 || edges > max_edges {
        return None;
    }
    Some(rows.iter().find(|r| r.0 == genus && r.1 == edges).map_or("0", |r| r.2))
}
