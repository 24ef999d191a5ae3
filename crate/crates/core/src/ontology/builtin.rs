use crate::model::KnowledgeBase;
use crate::text::{parse_kb, SourceDocument};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OntologyOptions {
    /// Adds the five GCIs found by concept learning.
    pub include_learned_gcis: bool,
    /// Adds placeholder classification GCIs for the event classes whose
    /// definitions are not published (Riot, AbnormalBehavior, Crowding,
    /// Throwing). They carry an `# INVENTED` marker when serialized.
    pub include_invented_gcis: bool,
}

/// Criminal event classes evaluated in the classification experiments.
pub const CRIME_CLASSES: [&str; 7] =
    ["Vandalism", "DamageVehicle", "DamageStructure", "Crowding", "Throwing", "Riot", "AbnormalBehavior"];

const VOCABULARY: &str = r#"
Class(SpatioTemporalParticular)
Class(Perdurant)
Class(Endurant)
Class(Event)
Class(Stative)
Class(State)
Class(Process)
Class(Achievement)
Class(Accomplishment)
Class(MetaLevelEvent)
Class(Accusing)
Class(Believing)
Class(Liking)
Class(PsychologicalAggression)
Class(Blaming)
Class(Bullying)
Class(Decrying)
Class(Harassing)
Class(Action)
Class(Gesture)
Class(PhysicalAggression)
Class(ActivePhysicalAggression)
Class(Dancing)
Class(Greeting)
Class(Hugging)
Class(Running)
Class(Loitering)
Class(Gathering)
Class(CriminalEvent)
Class(EventCategory)
Class(CrimeCategory)
Class(CrimeAgainstProperty)
Class(Vandalism)
Class(CyberCrime)
Class(Saying)
Class(Seeing)
Class(Explosion)
Class(Fighting)
Class(Kicking)
Class(Beating)
Class(Throwing)
Class(BreakingDoor)
Class(BreakingWindows)
Class(DamageVehicle)
Class(DamageStructure)
Class(Looting)
Class(Crowding)
Class(Riot)
Class(AbnormalBehavior)
Class(NonPhysicalEndurant)
Class(PhysicalEndurant)
Class(ArbitrarySum)
Class(Group)
Class(GroupOfPeople)
Class(NaturalPerson)
Class(Vehicle)
Class(Structure)
Class(Arm)
Class(Projectile)
Class(Shop)
Class(Debris)
Class(Source)
Class(Resource)
Role(participant)
Role(participantIn)
Role(participateIn)
Role(has)
Role(isFrom)
Role(hasPart)
Role(part)
Role(locatedSameAs)
Role(immediateRelation)
Role(isAbout)
Role(hasCameraId)
Role(hasVideoId)
DataProp(hasLatitude)
DataProp(hasLongitude)
DataProp(hasLocationName)
DataProp(hasStartTime)
DataProp(hasEndTime)
Traits(State, -telic, -stage, cumulative)
Traits(Process, -telic, +stage, unspecified)
Traits(Achievement, +telic, -stage, noncumulative)
Traits(Accomplishment, +telic, +stage, noncumulative)
"#;

const TAXONOMY: &str = r#"
Sub(Perdurant, SpatioTemporalParticular)
Sub(Perdurant, (some participant Endurant))
Sub(Fighting, (some participant GroupOfPeople))
Sub(Perdurant, (not Endurant))
Sub(Kicking, (not Vehicle))
Sub(State, Stative)
Sub(MetaLevelEvent, State)
Sub(Accusing, MetaLevelEvent)
Sub(Believing, MetaLevelEvent)
Sub(PsychologicalAggression, State)
Sub(Blaming, PsychologicalAggression)
Sub(Bullying, PsychologicalAggression)
Sub(Process, Stative)
Sub(Action, Process)
Sub(Gesture, Process)
Sub(PhysicalAggression, Process)
Sub(ActivePhysicalAggression, PhysicalAggression)
Sub(Accomplishment, Event)
Sub(CriminalEvent, Accomplishment)
Sub(EventCategory, Accomplishment)
Sub(CrimeCategory, Stative)
Sub(Achievement, Event)
Sub(Saying, Achievement)
Sub(Seeing, Achievement)
Sub(Endurant, SpatioTemporalParticular)
Sub(Endurant, (some participantIn Perdurant))
InverseOf(participantIn, participant)
Sub(NonPhysicalEndurant, Endurant)
Sub(PhysicalEndurant, Endurant)
Sub(ArbitrarySum, Endurant)
Sub(Event, Perdurant)
Sub(Stative, Perdurant)
Sub(Liking, MetaLevelEvent)
Sub(Decrying, PsychologicalAggression)
Sub(Harassing, PsychologicalAggression)
Sub(Dancing, Action)
Sub(Greeting, Action)
Sub(Hugging, Action)
Sub(Running, Action)
Sub(Loitering, Action)
Sub(Gathering, Action)
Sub(Throwing, ActivePhysicalAggression)
Sub(Kicking, ActivePhysicalAggression)
Sub(Beating, ActivePhysicalAggression)
Sub(BreakingDoor, ActivePhysicalAggression)
Sub(BreakingWindows, ActivePhysicalAggression)
Sub(Fighting, PhysicalAggression)
Sub(CrimeAgainstProperty, Accomplishment)
Sub(Vandalism, CrimeAgainstProperty)
Sub(DamageVehicle, CrimeAgainstProperty)
Sub(DamageStructure, CrimeAgainstProperty)
Sub(Looting, CrimeAgainstProperty)
Sub(CyberCrime, CriminalEvent)
Sub(Crowding, CriminalEvent)
Sub(Riot, CriminalEvent)
Sub(AbnormalBehavior, CriminalEvent)
Sub(Explosion, Achievement)
Sub(Group, ArbitrarySum)
Sub(GroupOfPeople, Group)
Sub(NaturalPerson, PhysicalEndurant)
Sub(Vehicle, PhysicalEndurant)
Sub(Structure, PhysicalEndurant)
Sub(Arm, PhysicalEndurant)
Sub(Projectile, PhysicalEndurant)
Sub(Shop, PhysicalEndurant)
Sub(Debris, PhysicalEndurant)
SubRole(participateIn, participantIn)
Sub(Source, (and Endurant (some has Resource) (some hasCameraId Thing)))
Sub(Resource, (and Endurant (some has Perdurant)))
InverseOf(isFrom, has)
Trans(has)
Trans(hasPart)
"#;

const CLASSIFICATION_GCIS: &str = r#"
Sub((and Perdurant (some participant (and Vehicle (some participantIn (or BreakingDoor BreakingWindows))))), DamageVehicle)
Sub((and Perdurant (some participant (and Structure (some participantIn Kicking)))), DamageStructure)
Sub((and Perdurant (some participant (and Structure (some participantIn Beating)))), DamageStructure)
Sub((and Perdurant (some participant (and Structure (some participantIn BreakingWindows)))), DamageStructure)
Sub((and Perdurant (some part (and Crowding DamageStructure))), Vandalism)
Sub((and Perdurant (some part (and Crowding DamageVehicle))), Vandalism)
Sub((and Perdurant (some part (and Explosion Throwing))), Vandalism)
Sub((and Perdurant (some part (and Crowding (some locatedSameAs Explosion)))), Vandalism)
Sub((and Perdurant (some part (and Crowding (some locatedSameAs DamageStructure)))), Vandalism)
Sub((and Perdurant (some part (and Crowding (some locatedSameAs Throwing)))), Vandalism)
Sub((and Perdurant (some part (and DamageStructure (some locatedSameAs Throwing)))), Vandalism)
Rule: Perdurant(?p1), Perdurant(?p2), hasLocationName(?p1, ?l1), hasLocationName(?p2, ?l2), SameAs(?l1, ?l2) -> locatedSameAs(?p1, ?p2)
"#;

const LEARNED_GCIS: &str = r#"
Sub((and PhysicalAggression (some immediateRelation Structure)), DamageStructure)
Sub((some immediateRelation Vehicle), DamageVehicle)
Sub((some immediateRelation Vandalism), AbnormalBehavior)
Sub((some immediateRelation Arm), Throwing)
Sub((some immediateRelation Group), Crowding)
"#;

const INVENTED_GCIS: &str = r#"
Sub((and Perdurant (some participant GroupOfPeople)), Crowding)  # INVENTED
Sub((and ActivePhysicalAggression (some participant Projectile)), Throwing)  # INVENTED
Sub((and Perdurant (some part (and Crowding Fighting))), Riot)  # INVENTED
Sub((and Perdurant (some part (and Explosion Fighting))), Riot)  # INVENTED
Sub((and Perdurant (some part (and Crowding (some locatedSameAs DamageVehicle)))), Riot)  # INVENTED
Sub((and Perdurant (some participant (and Shop (some participantIn Looting)))), Riot)  # INVENTED
Sub((and Perdurant (some participant (and NaturalPerson (some participantIn Running)))), AbnormalBehavior)  # INVENTED
Sub((and Perdurant (some participant (and NaturalPerson (some participantIn Loitering)))), AbnormalBehavior)  # INVENTED
"#;

/// The forensic event ontology: the Perdurant/Endurant taxonomy, the media
/// annotation model, the classification GCIs and the same-location rule.
pub fn builtin_ontology(options: OntologyOptions) -> KnowledgeBase {
    let mut text = String::new();
    text.push_str(VOCABULARY);
    text.push_str(TAXONOMY);
    text.push_str(CLASSIFICATION_GCIS);
    if options.include_learned_gcis {
        text.push_str(LEARNED_GCIS);
    }
    if options.include_invented_gcis {
        text.push_str(INVENTED_GCIS);
    }
    parse_kb(&SourceDocument::new(text, "builtin")).expect("builtin ontology is well formed")
}
