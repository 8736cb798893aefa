//! Training text for the built-in trigram language profiles. Plain prose,
//! written for this crate, chosen to carry each language's characteristic
//! letter combinations and word endings rather than any particular content.

pub const SLOVAK: &str = "\
Počasie na Slovensku bude cez víkend premenlivé, miestami sa očakávajú prehánky a silnejšie búrky. \
Vláda na svojom rokovaní schválila viacero nových opatrení, ktoré majú pomôcť obyvateľom miest a obcí. \
Výskumníci z univerzity predstavili výsledky svojej dlhoročnej práce o ochrane životného prostredia. \
Mestské zastupiteľstvo rozhodlo o oprave ciest a chodníkov v širšom centre mesta. \
Deti sa už teraz tešia na letné prázdniny, ktoré strávia u starých rodičov na vidieku. \
Slovenská reprezentácia vyhrala dôležitý zápas a postúpila do ďalšieho kola turnaja. \
Nové knihy si čitatelia môžu v knižnici požičať už od budúceho pondelka. \
Lekári upozorňujú, že v zimných mesiacoch je dôležité dbať na dostatok vitamínov a pohybu. \
Železničná spoločnosť oznámila zmeny v cestovnom poriadku, ktoré začnú platiť o mesiac. \
Učitelia a žiaci sa po dlhšej prestávke vrátili do svojich škôl a tried. \
Na námestí sa v sobotu uskutoční tradičný jarmok s ukážkami ľudových remesiel. \
Hovorca ministerstva uviedol, že konečné rozhodnutie padne až po dôkladnej analýze všetkých podkladov. \
Ceny potravín v obchodoch mierne klesli, ľudia však naďalej šetria a porovnávajú ponuky. \
Divadlo pripravilo pre svojich návštevníkov novú hru od známeho domáceho autora. \
Mnohí obyvatelia obce hovoria, že tohtoročná úroda ovocia a zeleniny bola mimoriadne dobrá. \
Polícia vyzýva vodičov, aby počas hmly jazdili opatrnejšie a nepreceňovali svoje schopnosti. \
Starosta pripomenul, že obec musí hospodáriť s obmedzeným rozpočtom a dôsledne plánovať. \
Do hrnca pridáme nakrájanú cibuľu, mrkvu a zemiaky, osolíme a varíme do mäkka. \
Cesto necháme kysnúť na teplom mieste aspoň hodinu, potom ho rozvaľkáme a naplníme tvarohom. \
V našom obchode nájdete širokú ponuku oblečenia, obuvi a doplnkov za výhodné ceny. \
Objednávku vám doručíme do troch pracovných dní, poštovné je pri nákupe nad tridsať eur zadarmo. \
Ak máte otázky, napíšte nám správu alebo zavolajte na zákaznícku linku. \
Turisti si môžu požičať bicykle priamo na námestí a vybrať sa po značených cyklotrasách okolo rieky. \
Včera večer sa nad mestom prehnala silná búrka, ktorá polámala stromy a strhla niekoľko striech. \
Hasiči zasahovali na viacerých miestach, nikto sa však nezranil. \
Výstava potrvá do konca septembra a vstup je voľný pre všetkých návštevníkov. \
Rodičia by mali s deťmi hovoriť o bezpečnosti na internete už od útleho veku. \
";

pub const CZECH: &str = "\
Počasí bude o víkendu proměnlivé, místy se čekají přeháňky, silnější bouřky a ochlazení. \
Vláda na svém středečním jednání schválila několik nových opatření, která mají pomoci obyvatelům měst i obcí. \
Výzkumníci z univerzity představili výsledky své dlouholeté práce o ochraně životního prostředí. \
Městské zastupitelstvo rozhodlo o opravě silnic a chodníků v širším středu města. \
Děti se už teď těší na letní prázdniny, které stráví u prarodičů na venkově. \
Česká reprezentace vyhrála důležité utkání a postoupila do dalšího kola turnaje. \
Nové knihy si čtenáři mohou v knihovně půjčit už od příštího pondělí. \
Lékaři upozorňují, že v zimních měsících je důležité dbát na dostatek vitamínů a pohybu. \
Železniční společnost oznámila změny v jízdním řádu, které začnou platit příští měsíc. \
Učitelé a žáci se po delší přestávce vrátili do svých škol a tříd. \
Na náměstí se v sobotu uskuteční tradiční jarmark s ukázkami lidových řemesel. \
Mluvčí ministerstva uvedl, že konečné rozhodnutí padne až po důkladném posouzení všech podkladů. \
Ceny potravin v obchodech mírně klesly, lidé však nadále šetří a porovnávají nabídky. \
Divadlo připravilo pro své návštěvníky novou hru od známého domácího autora. \
Mnozí obyvatelé obce říkají, že letošní úroda ovoce a zeleniny byla mimořádně dobrá. \
Policie vyzývá řidiče, aby během mlhy jezdili opatrněji a nepřeceňovali své schopnosti. \
Starosta připomněl, že obec musí hospodařit s omezeným rozpočtem a důsledně plánovat. \
Do hrnce přidáme nakrájenou cibuli, mrkev a brambory, osolíme a vaříme doměkka. \
Těsto necháme kynout na teplém místě alespoň hodinu, potom ho rozválíme a naplníme tvarohem. \
V našem obchodě najdete širokou nabídku oblečení, obuvi a doplňků za výhodné ceny. \
Objednávku vám doručíme do tří pracovních dnů, poštovné je při nákupu nad třicet eur zdarma. \
Pokud máte otázky, napište nám zprávu nebo zavolejte na zákaznickou linku. \
Turisté si mohou půjčit kola přímo na náměstí a vydat se po značených cyklostezkách kolem řeky. \
Včera večer se nad městem přehnala silná bouřka, která polámala stromy a strhla několik střech. \
Hasiči zasahovali na několika místech, nikdo se však nezranil. \
Výstava potrvá do konce září a vstup je volný pro všechny návštěvníky. \
Rodiče by měli s dětmi mluvit o bezpečnosti na internetu už od útlého věku. \
";

pub const ENGLISH: &str = "\
The weather over the weekend will be changeable, with scattered showers and stronger storms expected in places. \
The government approved several new measures at its meeting that should help the residents of towns and villages. \
Researchers from the university presented the results of their long-running work on protecting the environment. \
The city council decided to repair the roads and pavements in the wider centre of the town. \
Children are already looking forward to the summer holidays they will spend with their grandparents in the countryside. \
The national team won an important match and advanced to the next round of the tournament. \
Readers can borrow the new books from the library starting next Monday. \
Doctors point out that during the winter months it is important to get enough vitamins and exercise. \
The railway company announced changes to the timetable that will take effect next month. \
Teachers and pupils returned to their schools and classrooms after a longer break. \
A traditional fair with displays of folk crafts will take place on the square on Saturday. \
A ministry spokesperson said the final decision would come only after a thorough review of all the documents. \
Food prices in the shops fell slightly, but people continue to save and compare offers. \
The theatre has prepared a new play by a well-known local author for its visitors. \
Many residents of the village say that this year's harvest of fruit and vegetables was unusually good. \
Add the chopped onion, carrots and potatoes to the pot, season with salt and cook until soft. \
Leave the dough to rise in a warm place for at least an hour, then roll it out and fill it with cheese. \
Our shop offers a wide range of clothing, footwear and accessories at reasonable prices. \
Your order will be delivered within three working days, and shipping is free over thirty euros. \
If you have any questions, send us a message or call our customer line. \
Visitors can rent bicycles directly on the square and follow the marked cycling routes along the river. \
A strong storm swept over the town last night, breaking trees and tearing off several roofs. \
Firefighters responded in several places, but nobody was hurt. \
The exhibition runs until the end of September and admission is free for all visitors. \
";

pub const GERMAN: &str = "\
Das Wetter wird am Wochenende wechselhaft, örtlich werden Schauer und kräftige Gewitter erwartet. \
Die Regierung hat auf ihrer Sitzung mehrere neue Maßnahmen beschlossen, die den Bewohnern der Städte und Gemeinden helfen sollen. \
Forscher der Universität stellten die Ergebnisse ihrer langjährigen Arbeit zum Schutz der Umwelt vor. \
Der Stadtrat beschloss, die Straßen und Gehwege im weiteren Zentrum der Stadt zu erneuern. \
Die Kinder freuen sich schon jetzt auf die Sommerferien, die sie bei den Großeltern auf dem Land verbringen werden. \
Die Nationalmannschaft gewann ein wichtiges Spiel und zog in die nächste Runde des Turniers ein. \
Die neuen Bücher können die Leser ab dem kommenden Montag in der Bibliothek ausleihen. \
Ärzte weisen darauf hin, dass in den Wintermonaten ausreichend Vitamine und Bewegung wichtig sind. \
Die Bahngesellschaft kündigte Änderungen im Fahrplan an, die im nächsten Monat in Kraft treten. \
Lehrer und Schüler kehrten nach einer längeren Pause in ihre Schulen und Klassen zurück. \
Auf dem Platz findet am Samstag ein traditioneller Markt mit Vorführungen alten Handwerks statt. \
Ein Sprecher des Ministeriums sagte, die endgültige Entscheidung falle erst nach gründlicher Prüfung aller Unterlagen. \
Die Lebensmittelpreise in den Geschäften sind leicht gesunken, doch die Menschen sparen weiterhin und vergleichen Angebote. \
Die gehackte Zwiebel, Karotten und Kartoffeln in den Topf geben, salzen und weich kochen. \
Den Teig an einem warmen Ort mindestens eine Stunde gehen lassen, dann ausrollen und füllen. \
In unserem Geschäft finden Sie eine große Auswahl an Kleidung, Schuhen und Zubehör zu günstigen Preisen. \
Ihre Bestellung liefern wir innerhalb von drei Werktagen, der Versand ist ab dreißig Euro kostenlos. \
Bei Fragen schreiben Sie uns eine Nachricht oder rufen Sie unsere Kundenhotline an. \
Gestern Abend zog ein schweres Gewitter über die Stadt, das Bäume brach und mehrere Dächer abdeckte. \
Die Ausstellung läuft bis Ende September und der Eintritt ist für alle Besucher frei. \
";

pub const HUNGARIAN: &str = "\
Az időjárás a hétvégén változékony lesz, helyenként záporok és erősebb zivatarok várhatók. \
A kormány az ülésén több új intézkedést fogadott el, amelyek a városok és falvak lakóinak segítenek. \
Az egyetem kutatói bemutatták a környezet védelméről szóló többéves munkájuk eredményeit. \
A városi képviselőtestület úgy döntött, hogy felújítja az utakat és a járdákat a belvárosban. \
A gyerekek már most várják a nyári szünetet, amelyet vidéken a nagyszülőknél töltenek majd. \
A válogatott fontos mérkőzést nyert, és továbbjutott a torna következő fordulójába. \
Az új könyveket az olvasók jövő hétfőtől kölcsönözhetik ki a könyvtárból. \
Az orvosok arra figyelmeztetnek, hogy a téli hónapokban fontos az elegendő vitamin és a mozgás. \
A vasúttársaság bejelentette a menetrend változásait, amelyek a jövő hónapban lépnek életbe. \
A tanárok és a diákok hosszabb szünet után visszatértek az iskoláikba és az osztályaikba. \
Szombaton hagyományos vásárt tartanak a téren, népi mesterségek bemutatóival. \
A minisztérium szóvivője elmondta, hogy a végső döntés csak az összes irat alapos vizsgálata után születik meg. \
A felaprított hagymát, répát és burgonyát a fazékba tesszük, megsózzuk és puhára főzzük. \
A tésztát meleg helyen legalább egy órán át kelesztjük, majd kinyújtjuk és megtöltjük túróval. \
Üzletünkben ruhák, cipők és kiegészítők széles választékát találja kedvező áron. \
A rendelést három munkanapon belül kiszállítjuk, harminc euró felett a szállítás ingyenes. \
Tegnap este erős vihar vonult át a város felett, fákat tört ki és több tetőt megrongált. \
A kiállítás szeptember végéig tart, a belépés minden látogató számára ingyenes. \
";

pub const POLISH: &str = "\
Pogoda w weekend będzie zmienna, miejscami spodziewane są przelotne opady i silniejsze burze. \
Rząd na swoim posiedzeniu przyjął kilka nowych rozwiązań, które mają pomóc mieszkańcom miast i wsi. \
Naukowcy z uniwersytetu przedstawili wyniki swojej wieloletniej pracy nad ochroną środowiska. \
Rada miasta zdecydowała o naprawie dróg i chodników w szerszym centrum miasta. \
Dzieci już teraz cieszą się na letnie wakacje, które spędzą u dziadków na wsi. \
Reprezentacja wygrała ważny mecz i awansowała do kolejnej rundy turnieju. \
Nowe książki czytelnicy będą mogli wypożyczać z biblioteki od przyszłego poniedziałku. \
Lekarze przypominają, że w zimowych miesiącach ważna jest odpowiednia ilość witamin i ruchu. \
Spółka kolejowa ogłosiła zmiany w rozkładzie jazdy, które zaczną obowiązywać w przyszłym miesiącu. \
Nauczyciele i uczniowie wrócili po dłuższej przerwie do swoich szkół i klas. \
W sobotę na rynku odbędzie się tradycyjny jarmark z pokazami dawnych rzemiosł. \
Rzecznik ministerstwa powiedział, że ostateczna decyzja zapadnie dopiero po dokładnej analizie wszystkich dokumentów. \
Do garnka dodajemy posiekaną cebulę, marchew i ziemniaki, solimy i gotujemy do miękkości. \
Ciasto zostawiamy do wyrośnięcia w ciepłym miejscu przynajmniej na godzinę, potem rozwałkowujemy. \
W naszym sklepie znajdą państwo szeroki wybór odzieży, obuwia i dodatków w korzystnych cenach. \
Zamówienie dostarczymy w ciągu trzech dni roboczych, wysyłka powyżej trzydziestu euro jest darmowa. \
Wczoraj wieczorem nad miastem przeszła silna burza, która połamała drzewa i zerwała kilka dachów. \
Wystawa potrwa do końca września, a wstęp jest wolny dla wszystkich zwiedzających. \
";

pub const RUSSIAN: &str = "\
Погода в выходные будет переменчивой, местами ожидаются дожди и сильные грозы. \
Правительство на своём заседании одобрило несколько новых мер, которые должны помочь жителям городов и сёл. \
Исследователи из университета представили результаты своей многолетней работы по охране окружающей среды. \
Городской совет решил отремонтировать дороги и тротуары в центре города. \
Дети уже сейчас ждут летних каникул, которые проведут у бабушек и дедушек в деревне. \
Сборная выиграла важный матч и вышла в следующий круг турнира. \
Новые книги читатели смогут взять в библиотеке уже со следующего понедельника. \
Врачи напоминают, что в зимние месяцы важно получать достаточно витаминов и движения. \
Железнодорожная компания объявила об изменениях в расписании, которые вступят в силу в следующем месяце. \
Учителя и ученики вернулись в свои школы после длительного перерыва. \
В субботу на площади пройдёт традиционная ярмарка с показом народных ремёсел. \
Представитель министерства сообщил, что окончательное решение будет принято после тщательного изучения всех документов. \
В кастрюлю добавляем нарезанный лук, морковь и картофель, солим и варим до мягкости. \
Тесто оставляем подходить в тёплом месте не меньше часа, затем раскатываем и начиняем творогом. \
В нашем магазине вы найдёте широкий выбор одежды, обуви и аксессуаров по выгодным ценам. \
Заказ доставим в течение трёх рабочих дней, доставка бесплатна при покупке от тридцати евро. \
Вчера вечером над городом прошла сильная гроза, которая поломала деревья и сорвала несколько крыш. \
Выставка продлится до конца сентября, вход свободный для всех посетителей. \
";
