#![allow(clippy::excessive_precision, clippy::approx_constant, dead_code)]
// Generated by tests/data/gen_oracles.py (mpmath, 60 digits). Do not edit.

/// (a, x, Q(a, x))
pub const REG_UPPER_GAMMA_Q: &[(f64, f64, f64)] = &[
    (0.5, 0.0, 1.0),
    (
        0.5,
        0.25,
        0.47950012218695346231725334610803547126354842424204,
    ),
    (
        0.5,
        1.0,
        0.1572992070502851306587793649173907407039330020337,
    ),
    (
        0.5,
        3.0,
        0.01430587843542963952584780642225069357366252284956,
    ),
    (
        0.5,
        7.5,
        0.00010751117672950056338491831561416361430102373823824,
    ),
    (
        0.5,
        12.0,
        0.00000096335700864309458844763821967492901418413307638847,
    ),
    (
        0.5,
        25.0,
        0.0000000000015374597944280348501883434853833788901180503147234,
    ),
    (
        0.5,
        40.0,
        3.7440973842028987635638044951514011245635069571852e-19,
    ),
    (
        0.5,
        60.0,
        6.3260682636772614881806032794451346891842862821083e-28,
    ),
    (
        0.5,
        100.0,
        2.0884875837625447570007862949577886115608181193212e-45,
    ),
    (
        0.5,
        150.0,
        3.2943623833140411540544797254763478858324494116214e-67,
    ),
    (
        0.5,
        200.0,
        5.5072482372124673901512455617149306656149954695187e-89,
    ),
    (1.0, 0.0, 1.0),
    (
        1.0,
        0.25,
        0.77880078307140486824517026697832064729677229042614,
    ),
    (
        1.0,
        1.0,
        0.36787944117144232159552377016146086744581113103177,
    ),
    (
        1.0,
        3.0,
        0.049787068367863942979342415650061776631699592188423,
    ),
    (
        1.0,
        7.5,
        0.0005530843701478335831020000885303571978113365824402,
    ),
    (
        1.0,
        12.0,
        0.0000061442123533282097586823081788055323112239893148883,
    ),
    (
        1.0,
        25.0,
        0.000000000013887943864964020594661763746086856910399760380205,
    ),
    (
        1.0,
        40.0,
        4.2483542552915889953292347828586580178795655541664e-18,
    ),
    (
        1.0,
        60.0,
        8.7565107626965203384887328007391660365571074817818e-27,
    ),
    (
        1.0,
        100.0,
        3.7200759760208359629596958038631183373588922923768e-44,
    ),
    (
        1.0,
        150.0,
        7.1750959731644104198326929072089881884086882742441e-66,
    ),
    (
        1.0,
        200.0,
        1.3838965267367375306486814569790846854030475823395e-87,
    ),
    (1.5, 0.0, 1.0),
    (
        1.5,
        0.25,
        0.91889141165467585936411532352026442044480941904301,
    ),
    (
        1.5,
        1.0,
        0.57240670447087983399904761435872810607284003197297,
    ),
    (
        1.5,
        3.0,
        0.11161022509471255997702863464704723246269174195146,
    ),
    (
        1.5,
        7.5,
        0.0018166489665723232336175584834697055023113739773808,
    ),
    (
        1.5,
        12.0,
        0.000024979977724652008440480299925804157622447443627325,
    ),
    (
        1.5,
        25.0,
        0.000000000079891792449514711391405185098489236801894090015863,
    ),
    (
        1.5,
        40.0,
        3.0692774861724171288613803105181875048699094555469e-17,
    ),
    (
        1.5,
        60.0,
        7.7167903556341587075693602964282584327453825378851e-26,
    ),
    (
        1.5,
        100.0,
        4.2185411071920423376571278193188959140784728112006e-43,
    ),
    (
        1.5,
        150.0,
        9.9487583463277088690301579211978427959408524683282e-65,
    ),
    (
        1.5,
        200.0,
        2.2138865931011177432232455186765153121987851304775e-86,
    ),
    (2.0, 0.0, 1.0),
    (
        2.0,
        0.25,
        0.97350097883925608530646283372290080912096536303268,
    ),
    (
        2.0,
        1.0,
        0.73575888234288464319104754032292173489162226206354,
    ),
    (
        2.0,
        3.0,
        0.19914827347145577191736966260024710652679836875369,
    ),
    (
        2.0,
        7.5,
        0.0047012171462565854563670007525080361813963609507417,
    ),
    (
        2.0,
        12.0,
        0.000079874760593266726862870006324471920045911861093547,
    ),
    (
        2.0,
        25.0,
        0.00000000036108654048906453546120585739825827967039376988533,
    ),
    (
        2.0,
        40.0,
        1.7418252446695514880849862609720497873306218772082e-16,
    ),
    (
        2.0,
        60.0,
        5.3414715652448774064781270084508912822998355638869e-25,
    ),
    (
        2.0,
        100.0,
        3.7572767357810443225892927619017495207324812153005e-42,
    ),
    (
        2.0,
        150.0,
        1.0834394919478259733947366289885572164497119294109e-63,
    ),
    (
        2.0,
        200.0,
        2.7816320187408424366038497285279602176601256405023e-85,
    ),
    (3.7, 0.0, 1.0),
    (
        3.7,
        0.25,
        0.99968456922258828489061366637324506550002479580118,
    ),
    (
        3.7,
        1.0,
        0.97004594025583783437786361679673574944067530334658,
    ),
    (
        3.7,
        3.0,
        0.58422480243075187363479422448769633368842262770582,
    ),
    (
        3.7,
        7.5,
        0.044290139989468559463140216103535656446280761290902,
    ),
    (
        3.7,
        12.0,
        0.0015204466191189929312436842055741439869954247508298,
    ),
    (
        3.7,
        25.0,
        0.000000022098359124906777901141213378833475807022895069105,
    ),
    (
        3.7,
        40.0,
        0.000000000000023074505966101640918609976804418982213234363056069,
    ),
    (
        3.7,
        60.0,
        1.3892727683633580017510791052524788243444968835579e-22,
    ),
    (
        3.7,
        100.0,
        2.3020445988075960081851515335747375097805956792976e-39,
    ),
    (
        3.7,
        150.0,
        1.3149383351946526821718053854952970679621168316132e-60,
    ),
    (
        3.7,
        200.0,
        5.4897652013165400562386637713756356422334385805797e-82,
    ),
    (5.0, 0.0, 1.0),
    (
        5.0,
        0.25,
        0.99999338828943896575295381448437037541084580064646,
    ),
    (
        5.0,
        1.0,
        0.99634015317265628765454354418728984933240514654437,
    ),
    (
        5.0,
        3.0,
        0.81526324452377206628673205626976159234408082208543,
    ),
    (
        5.0,
        7.5,
        0.13206185628772060781520647426369771122428031225875,
    ),
    (
        5.0,
        12.0,
        0.0076003906810669954714900152171824434689840747825168,
    ),
    (
        5.0,
        25.0,
        0.00000026690834249044956396946432775495069429437412815038,
    ),
    (
        5.0,
        40.0,
        0.00000000000050204643188291333513036876764113333882423907298658,
    ),
    (
        5.0,
        60.0,
        5.0600460658425739393194376249679352250509266865299e-21,
    ),
    (
        5.0,
        100.0,
        1.6139305336977304790405739225035685228527400976549e-37,
    ),
    (
        5.0,
        150.0,
        1.5546747543803181059769826830357974012956170289411e-58,
    ),
    (
        5.0,
        200.0,
        9.4132919911834760918966973088690193097137062563295e-80,
    ),
    (10.0, 0.0, 1.0),
    (
        10.0,
        0.25,
        0.99999999999979057514600026388839745850114807785738,
    ),
    (
        10.0,
        1.0,
        0.9999998885745216612793226469493127597476371190505,
    ),
    (
        10.0,
        3.0,
        0.99889751186988452025786019827905194883117994291612,
    ),
    (
        10.0,
        7.5,
        0.77640761301971443302119060308468031173724361319056,
    ),
    (
        10.0,
        12.0,
        0.24239216167051234868189984620356509807919468726715,
    ),
    (
        10.0,
        25.0,
        0.00022147663824878358122091455344800186069494099627019,
    ),
    (
        10.0,
        40.0,
        0.0000000039259322262861881947128012273879907841935863914578,
    ),
    (
        10.0,
        60.0,
        2.8515077555520201596489326746345048950214526762174e-16,
    ),
    (
        10.0,
        100.0,
        1.1253473960842733885275000458332008523589569460531e-31,
    ),
    (
        10.0,
        150.0,
        8.0828496297759098595892347147502016887494657449978e-52,
    ),
    (
        10.0,
        200.0,
        2.044095593580731966834977556858259468210681298831e-72,
    ),
    (20.5, 0.0, 1.0),
    (
        20.5,
        0.25,
        0.99999999999999999999999999999996766863842299382024,
    ),
    (
        20.5,
        1.0,
        0.99999999999999999996519071100407032154683285934279,
    ),
    (
        20.5,
        3.0,
        0.99999999996850608089217828375599588438084649718226,
    ),
    (
        20.5,
        7.5,
        0.99993419888348989025249135410766176255726365395423,
    ),
    (
        20.5,
        12.0,
        0.98420762992100038810538412183096106398691043341867,
    ),
    (
        20.5,
        25.0,
        0.15824376990134332826093139690543526546782821547964,
    ),
    (
        20.5,
        40.0,
        0.00025636270630141476723514433385495995147240419647582,
    ),
    (
        20.5,
        60.0,
        0.0000000011201594298967839555706917709555243453574687034528,
    ),
    (
        20.5,
        100.0,
        8.5230243477357726339169651899207972369777955512819e-23,
    ),
    (
        20.5,
        150.0,
        4.1371757337210693178643677391067182573646146625426e-41,
    ),
    (
        20.5,
        200.0,
        2.1017886118500605658149353420852914672814794184534e-60,
    ),
    (33.0, 0.0, 1.0),
    (33.0, 0.25, 1.0),
    (
        33.0,
        1.0,
        0.99999999999999999999999999999999999995635108498768,
    ),
    (
        33.0,
        3.0,
        0.99999999999999999999996505101327343305905880368241,
    ),
    (
        33.0,
        7.5,
        0.99999999999385670777403330774100537827950899985386,
    ),
    (
        33.0,
        12.0,
        0.99999955496847783116697253264664709793945290950548,
    ),
    (
        33.0,
        25.0,
        0.9285439687599414077329537312076137417696246770843,
    ),
    (
        33.0,
        40.0,
        0.1153035849339556534018882430904983694138479932881,
    ),
    (
        33.0,
        60.0,
        0.000054784618105141456940901211540759827832135178364737,
    ),
    (
        33.0,
        100.0,
        0.0000000000000020653609908198932744422195353189540307794669152358,
    ),
    (
        33.0,
        150.0,
        1.4921389437340591050084145742628667238491326793694e-31,
    ),
    (
        33.0,
        200.0,
        2.6861307019838608122698876625727171319577244105375e-49,
    ),
    (50.0, 0.0, 1.0),
    (50.0, 0.25, 1.0),
    (50.0, 1.0, 1.0),
    (
        50.0,
        3.0,
        0.99999999999999999999999999999999999999999875146451,
    ),
    (
        50.0,
        7.5,
        0.99999999999999999999999879325411872333260081680693,
    ),
    (
        50.0,
        12.0,
        0.99999999999999976001205463214223265406285739362965,
    ),
    (
        50.0,
        25.0,
        0.99999304669475238390103117219693971850465529493564,
    ),
    (
        50.0,
        40.0,
        0.92966493334060504556273609743471281798974702071531,
    ),
    (
        50.0,
        60.0,
        0.08440668109369182962266413612277291606594579975118,
    ),
    (
        50.0,
        100.0,
        0.00000001178450072097942244617454215486775379186479550321,
    ),
    (
        50.0,
        150.0,
        7.4121008573228767906054653514646718821077086003942e-22,
    ),
    (
        50.0,
        200.0,
        1.6927979958857087672639110957984598538644820398882e-37,
    ),
];

/// (x, erfc(x))
pub const ERFC: &[(f64, f64)] = &[
    (-3.0, 1.9999779095030014145586272238704176796201522929126),
    (-1.7, 1.9837904585907745636262425881218812134327204958937),
    (-0.5, 1.520499877813046537682746653891964528736451575758),
    (0.0, 1.0),
    (0.001, 0.99887162120903076362005152234309518740075313678735),
    (0.1, 0.8875370839817151077967249282560316167783037008403),
    (0.5, 0.47950012218695346231725334610803547126354842424204),
    (1.0, 0.1572992070502851306587793649173907407039330020337),
    (1.7, 0.016209541409225436373757411878118786567279504106312),
    (2.0, 0.0046777349810472658379307436327470713891082029599399),
    (2.5, 0.00040695201744495893956421573997491272034867740371342),
    (3.0, 0.00002209049699858544137277612958232037984770708739925),
    (
        4.0,
        0.000000015417257900280018852159673486884048572145253589191,
    ),
    (
        5.0,
        0.0000000000015374597944280348501883434853833788901180503147234,
    ),
    (6.0, 2.1519736712498913116593350399187384630477514061689e-17),
    (7.5, 2.7766493860305691006639662093224125867396886408958e-26),
    (9.0, 4.137031746513810238053903467362524595710191985948e-37),
    (
        10.0,
        2.0884875837625447570007862949577886115608181193212e-45,
    ),
    (
        12.0,
        1.3562611692059042127803061565904175726667822332881e-64,
    ),
    (
        20.0,
        5.3958656116079009289349991679053456040882726709236e-176,
    ),
];

/// (m, erfc(m / sqrt(2)))
pub const ERFC_HALF_SQRT2: &[(f64, f64)] = &[
    (0.0, 1.0),
    (0.625, 0.5319710580974010646206810683695327236751946262855),
    (1.25, 0.21129954733371051537754552805149310969521945570467),
    (1.5, 0.13361440253771613200898808195977215904579037132244),
    (2.125, 0.033586612896897625179846166672131724698975762396481),
    (2.75, 0.005959526470109113508588493972853574287356112806825),
    (3.0, 0.0026997960632601890533036295351899547556587363167613),
    (
        3.625,
        0.00028896145176247153488166674584134948522223342970067,
    ),
    (
        4.25,
        0.000021377051549868840938401115625442458019760351259897,
    ),
    (
        4.5,
        0.0000067953462494601208033748983817430470242095301736973,
    ),
    (
        5.125,
        0.00000029753774637553257001119837267872758817345461645853,
    ),
    (
        5.75,
        0.0000000089243449078032237461384451768324704570323980731436,
    ),
    (
        6.0,
        0.0000000019731752900753962814017282647960840373395824999581,
    ),
    (
        6.625,
        0.000000000034724817907041137502946863685177788952028316736868,
    ),
    (
        7.25,
        0.00000000000041677163173441388623799952814518935478788743218467,
    ),
    (
        7.5,
        0.000000000000063817833458217924555345766894527106257512735687094,
    ),
    (
        8.125,
        4.4736241288882100933600232149904535055946157015215e-16,
    ),
    (
        8.75,
        2.1335274750949716005725169877930591687967093626749e-18,
    ),
    (9.0, 2.2571768119076812954710041519374945159600838016363e-19),
    (
        9.625,
        6.2706924637749527913888570176014992935871935407863e-22,
    ),
    (
        10.25,
        1.1834353814731235700640543080855310408942129319733e-24,
    ),
    (
        10.5,
        8.6380126356184606930956343145884450129235707108799e-26,
    ),
    (
        11.125,
        9.4805874389431958835502836864824801799541676017681e-29,
    ),
    (
        11.75,
        7.0618847917719865172376604789024097219464183914311e-32,
    ),
    (
        12.0,
        3.5529642241553579953923420036911141847853328683579e-33,
    ),
    (
        20.0,
        5.5072482372124673901512455617149306656149954695187e-89,
    ),
    (
        30.0,
        9.813427854296374119067618513160380943993969882785e-198,
    ),
];

/// (a, ln Gamma(a))
pub const LN_GAMMA: &[(f64, f64)] = &[
    (0.001, 6.9071788853838536825123446680769825021599616174461),
    (0.01, 4.5994798780420217225139454110087480872610014133853),
    (0.1, 2.252712651734205959869701646368495118615627222295),
    (0.5, 0.57236494292470008707171367567652935582364740645766),
    (0.9, 0.066376239734742971188716739867108584242352059366274),
    (1.5, -0.1207822376352452223455184457816472122518527279026),
    (2.5, 0.28468287047291915963249466968270192432013769555989),
    (3.0, 0.69314718055994530941723212145817656807550013436026),
    (7.25, 7.0521854507385394449257492531330102454182071072709),
    (10.0, 12.801827480081469611207717874566706164281149255663),
    (33.3, 82.603723581654952928323034010949783602663304625216),
    (100.0, 359.13420536957539877604401046028690961262171808563),
    (1000.5, 5908.6741758486774886838747340626248804970154682586),
    (
        12345.678,
        103959.9199055460609210805704936834203148137171113,
    ),
    (
        1000000.0,
        12815504.569147611659976971785017113153687975196215,
    ),
];
